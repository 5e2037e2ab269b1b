#pragma once

// Heat kernels H^R of L = -Lap + a R on the catalogue spaces.
//
// R is constant on every catalogue space, so H^R = e^{-a R t} H with H the
// Laplace heat kernel (minimal fundamental solutions are unique). The Laplace
// kernels are:
//   gaussian  (4 pi t)^{-n/2} exp(-|x-y|^2 / 4t)
//   sphere    zonal series  V^{-1} sum_l dim_l e^{-l(l+n-1) t / r^2} Z_l(cos theta),
//             with exact image representations for S^2 and S^3 at short times
//   cylinder  sphere factor times the one-dimensional Euclidean kernel.
// The fd_dirichlet method instead time-marches the radial Dirichlet problem on
// B(x, r_max) in gaussian:n, which realises one member of an exhaustion.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "solitonlab/spaces.hpp"
#include "solitonlab/spectral.hpp"

namespace solitonlab {

enum class KernelMethod { closed_form, spectral_series, fd_dirichlet };

std::string_view to_string(KernelMethod method);
KernelMethod parse_kernel_method(std::string_view name);

struct KernelParams {
    double epsilon = 1e-15;  // absolute series truncation threshold
    double t_min = 1e-3;     // smallest time accepted by the zonal series
    int l_max = 2000;        // series degree cap
    double r_max = 40.0;     // FD Dirichlet radius
    int m = 4096;            // FD radial unknowns (a multiple of 4)
    double dt_ratio = 5e-4;  // FD step: min(dt_max, dt_ratio * t)
    double dt_max = 0.02;
    double t0 = 1e-3;        // FD bootstrap time
};

struct KernelValue {
    double value = 0.0;
    double log_value = 0.0;  // log(value); stays finite where value underflows
    double error = 0.0;      // absolute error estimate
    double relative_error = 0.0;  // error / value, kept where value underflows
};

/// Euclidean heat kernel in R^n.
KernelValue euclidean_kernel(int n, double distance, double t);

/// Laplace heat kernel on the round k-sphere of radius r by the zonal series.
/// Throws for t < t_min or when l_max is reached before the tolerance.
KernelValue sphere_kernel_series(int k, double radius, double angle, double t, double epsilon,
                                 int l_max, double t_min);

/// Exact image representations of the Laplace kernel on S^2 and S^3 of
/// radius r. Accurate for t / r^2 <= 1; the closed_form method uses them
/// below t / r^2 = 1/2 and the series above.
KernelValue sphere_kernel_image(int k, double radius, double angle, double t);

bool has_sphere_image_formula(int k);

class FdKernel;

/// Time-stepping settings for the radial Crank-Nicolson solver.
struct TimeStepping {
    double dt_ratio = 0.01;
    double dt_max = 0.02;
    double dt_min = 1e-8;  // floor for marches that start at t = 0
};

/// Crank-Nicolson on u_t = -A u for a radial DiscretizedOperator.
class FdSolver {
public:
    FdSolver(DiscretizedOperator op, TimeStepping steps);

    const DiscretizedOperator& op() const noexcept { return op_; }

    /// Advances u0 from t_start through the sorted output `times` (all > t_start).
    std::vector<std::vector<double>> march(std::vector<double> u0, double t_start,
                                           std::span<const double> times) const;

private:
    DiscretizedOperator op_;
    TimeStepping steps_;
};

/// Dirichlet kernel H_B(0, y, t) on B(0, r_max) in gaussian:n, bootstrapped
/// from the exact kernel at t0 rescaled to carry its exact mass on the grid.
class FdKernel {
public:
    FdKernel(DiscretizedOperator op, double t0, TimeStepping steps);

    double t0() const noexcept { return t0_; }
    const DiscretizedOperator& op() const noexcept { return solver_.op(); }

    /// Grid profiles u(r_i, t) at the sorted `times` (each > t0).
    std::vector<std::vector<double>> profiles(std::span<const double> times) const;
    /// Interpolated value of a grid profile at radius r (zero for r >= r_max).
    /// Cubic Lagrange in log u where the four nodes are positive (exact for
    /// Gaussian tails), in u otherwise.
    double interpolate(const std::vector<double>& profile, double r) const;
    /// int u dv over the ball.
    double mass(const std::vector<double>& profile) const;

    double value(double y_radius, double t) const;

private:
    FdSolver solver_;
    double t0_;
};

/// Limit h -> 0 of a quantity with an expansion c0 + c1 h^2 + c2 h^4 in its
/// logarithm, from its values on the grids h, 4h/3 and 2h. Falls back to
/// `fine` unless all three values are positive.
double fd_extrapolate(double fine, double mid, double coarse);

class HeatKernel {
public:
    HeatKernel(SolitonSpace space, double a, KernelMethod method, KernelParams params = {});

    const SolitonSpace& space() const noexcept { return space_; }
    double coupling() const noexcept { return a_; }
    KernelMethod method() const noexcept { return method_; }
    const KernelParams& params() const noexcept { return params_; }

    KernelValue evaluate(const Point& x, const Point& y, double t) const;
    KernelValue evaluate(const Separation& s, double t) const;

    /// Only for fd_dirichlet: the solver on the finest grid (spacing h = r_max / m).
    const FdKernel& fd() const;
    /// Only for fd_dirichlet: level 0 is fd(), levels 1 and 2 have spacing 4h/3 and 2h.
    const FdKernel& fd_level(int level) const;
    /// Only for fd_dirichlet: marches all three grids through `times` at once
    /// so that later evaluations at those times are cache hits.
    void prefetch(std::span<const double> times) const;

private:
    KernelValue fd_value(double radius, double t) const;

    SolitonSpace space_;
    double a_;
    KernelMethod method_;
    KernelParams params_;
    // fd_dirichlet values are extrapolated in log u from the grids
    // h, 4h/3 and 2h, which cancels the h^2 and h^4 error terms.
    std::vector<std::shared_ptr<const FdKernel>> fd_levels_;
    struct FdCache {
        std::mutex mutex;
        std::map<double, std::vector<std::vector<double>>> profiles;
    };
    std::shared_ptr<FdCache> cache_;
};

struct GreenValue {
    double value = 0.0;
    double error = 0.0;
};

/// G^R(x, y) = int_0^inf H^R(x, y, t) dt for n >= 3, split at t = r^2.
class GreenFunction {
public:
    GreenFunction(SolitonSpace space, double a, KernelParams params = {});

    const SolitonSpace& space() const noexcept { return kernel_.space(); }
    double coupling() const noexcept { return kernel_.coupling(); }

    GreenValue evaluate(const Point& x, const Point& y) const;
    GreenValue evaluate(const Separation& s) const;

private:
    HeatKernel kernel_;
    double spectral_floor_;  // bottom of the spectrum of L (0 on gaussian)
};

struct VolumeGrowth {
    double value = 0.0;
    bool divergent = false;
};

/// int_1^{T_max} t / V_p(t) dt, flagged divergent when the last doubling of
/// the range still adds more than 1e-3 of the total.
VolumeGrowth volume_growth_integral(const SolitonSpace& space, const Point& p, double t_max);

}  // namespace solitonlab
