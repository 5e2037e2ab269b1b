#include <algorithm>
#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/kernels.hpp"

namespace solitonlab {

FdSolver::FdSolver(DiscretizedOperator op, TimeStepping steps) : op_(std::move(op)), steps_(steps) {
    if (!(steps.dt_ratio > 0.0) || !(steps.dt_max > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "time steps must be positive");
    }
    // Crank-Nicolson is unconditionally stable, but its error constant grows with
    // dt / t; beyond a tenth of the current time the kernel decay is not resolved.
    if (steps.dt_ratio > 0.1) {
        throw Error(ErrorCode::under_resolved,
                    "dt_ratio " + std::to_string(steps.dt_ratio) + " exceeds 0.1");
    }
}

namespace {

// (I + c A) x = rhs for the tridiagonal A, by the Thomas algorithm.
void solve_shifted(const DiscretizedOperator& op, double c, std::vector<double>& rhs,
                   std::vector<double>& scratch) {
    const int m = op.m;
    scratch.resize(m);
    double denom = 1.0 + c * op.diag[0];
    scratch[0] = c * op.upper[0] / denom;
    rhs[0] /= denom;
    for (int i = 1; i < m; ++i) {
        const double low = c * op.lower[i];
        denom = 1.0 + c * op.diag[i] - low * scratch[i - 1];
        scratch[i] = i + 1 < m ? c * op.upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - low * rhs[i - 1]) / denom;
    }
    for (int i = m - 2; i >= 0; --i) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace

std::vector<std::vector<double>> FdSolver::march(std::vector<double> u, double t,
                                                 std::span<const double> times) const {
    if (static_cast<int>(u.size()) != op_.m) {
        throw Error(ErrorCode::invalid_argument, "initial data does not match the grid");
    }
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    std::vector<double> rhs(u.size());
    std::vector<double> scratch;
    for (double target : times) {
        if (target < t) throw Error(ErrorCode::invalid_argument, "output times must be increasing");
        while (t < target) {
            double dt = std::min(steps_.dt_max, std::max(steps_.dt_min, steps_.dt_ratio * t));
            if (t + dt * 1.25 >= target) dt = target - t;
            const std::vector<double> au = op_.apply(u);
            for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] - 0.5 * dt * au[i];
            solve_shifted(op_, 0.5 * dt, rhs, scratch);
            u.swap(rhs);
            t = t + dt == t ? target : t + dt;
        }
        out.push_back(u);
    }
    return out;
}

FdKernel::FdKernel(DiscretizedOperator op, double t0, TimeStepping steps)
    : solver_(std::move(op), steps), t0_(t0) {
    if (!(t0 > 0.0)) throw Error(ErrorCode::invalid_argument, "bootstrap time t0 must be > 0");
    const double h = solver_.op().h;
    // The bootstrap Gaussian has width sqrt(2 t0); fewer than two cells per
    // width leaves its mass and shape unresolved.
    if (std::sqrt(2.0 * t0) < 2.0 * h) {
        throw Error(ErrorCode::under_resolved, "grid spacing h = " + std::to_string(h) +
                                                   " does not resolve the bootstrap width at t0 = " +
                                                   std::to_string(t0));
    }
}

std::vector<std::vector<double>> FdKernel::profiles(std::span<const double> times) const {
    for (double t : times) {
        if (!(t > t0_)) throw Error(ErrorCode::invalid_argument, "fd kernel needs t > t0");
    }
    const DiscretizedOperator& op = solver_.op();
    std::vector<double> u0(op.m);
    const double pre = std::pow(4.0 * std::numbers::pi * t0_, -0.5 * op.n);
    const double damping = std::exp(-op.shift * t0_);  // R = 0 on gaussian:n
    double grid_mass = 0.0;
    for (int i = 0; i < op.m; ++i) {
        const double r = op.radii[i];
        u0[i] = pre * std::exp(-r * r / (4.0 * t0_));
        grid_mass += op.weights[i] * u0[i];
    }
    // The cell sum of the sampled Gaussian overshoots its mass by O(h^2 / t0),
    // and the scheme conserves that surplus for all later times.
    for (double& v : u0) v *= damping / grid_mass;
    return solver_.march(std::move(u0), t0_, times);
}

double FdKernel::interpolate(const std::vector<double>& profile, double r) const {
    const DiscretizedOperator& op = solver_.op();
    r = std::abs(r);
    if (r >= op.r_max) return 0.0;
    const int m = op.m;
    // Even extension through the origin, odd through the Dirichlet wall.
    const auto node = [&](int j) {
        if (j < 0) j = -j;
        if (j < m) return profile[j];
        if (j == m) return 0.0;
        const int mirror = 2 * m - j;
        return mirror >= 0 && mirror < m ? -profile[mirror] : 0.0;
    };
    const double x = r / op.h;
    const int i = static_cast<int>(std::floor(x));
    const double p = x - i;
    // Four-point Lagrange on nodes i-1, i, i+1, i+2.
    const double l0 = -p * (p - 1.0) * (p - 2.0) / 6.0;
    const double l1 = (p + 1.0) * (p - 1.0) * (p - 2.0) / 2.0;
    const double l2 = -(p + 1.0) * p * (p - 2.0) / 2.0;
    const double l3 = (p + 1.0) * p * (p - 1.0) / 6.0;
    const double v[4] = {node(i - 1), node(i), node(i + 1), node(i + 2)};
    if (v[0] > 0.0 && v[1] > 0.0 && v[2] > 0.0 && v[3] > 0.0) {
        return std::exp(l0 * std::log(v[0]) + l1 * std::log(v[1]) + l2 * std::log(v[2]) +
                        l3 * std::log(v[3]));
    }
    return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

double FdKernel::mass(const std::vector<double>& profile) const {
    const DiscretizedOperator& op = solver_.op();
    double s = 0.0;
    for (int i = 0; i < op.m; ++i) s += op.weights[i] * profile[i];
    return s;
}

double FdKernel::value(double y_radius, double t) const {
    const double times[] = {t};
    return interpolate(profiles(times)[0], y_radius);
}

}  // namespace solitonlab
