#include "solitonlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "solitonlab/error.hpp"

namespace solitonlab {

std::string_view to_string(KernelMethod method) {
    switch (method) {
        case KernelMethod::closed_form: return "closed_form";
        case KernelMethod::spectral_series: return "spectral_series";
        case KernelMethod::fd_dirichlet: return "fd_dirichlet";
    }
    return "?";
}

KernelMethod parse_kernel_method(std::string_view name) {
    if (name == "closed_form" || name == "closed-form") return KernelMethod::closed_form;
    if (name == "spectral_series" || name == "series") return KernelMethod::spectral_series;
    if (name == "fd_dirichlet" || name == "fd") return KernelMethod::fd_dirichlet;
    throw Error(ErrorCode::invalid_argument, "unknown kernel method '" + std::string(name) + "'");
}

namespace {

// Below this value of t / r^2 the closed form on S^2 and S^3 switches from the
// zonal series to the image representation; the series is cheap and fully
// resolved above it even for antipodal pairs.
constexpr double kImageSwitch = 0.5;

KernelValue scale_log(KernelValue v, double log_factor) {
    v.log_value += log_factor;
    const double f = std::exp(log_factor);
    v.value *= f;
    v.error *= f;
    return v;
}

KernelValue product(const KernelValue& p, const KernelValue& q) {
    KernelValue out;
    out.value = p.value * q.value;
    out.log_value = p.log_value + q.log_value;
    out.error = p.error * std::abs(q.value) + q.error * std::abs(p.value);
    out.relative_error = p.relative_error + q.relative_error;
    return out;
}

}  // namespace

HeatKernel::HeatKernel(SolitonSpace space, double a, KernelMethod method, KernelParams params)
    : space_(space), a_(a), method_(method), params_(params) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw Error(ErrorCode::invalid_argument, "coupling a must be finite and >= 0");
    }
    if (method == KernelMethod::fd_dirichlet) {
        if (space.kind() != SpaceKind::gaussian) {
            throw Error(ErrorCode::kind_mismatch, "fd_dirichlet is implemented for gaussian:n only");
        }
        if (params.m % 4 != 0) {
            throw Error(ErrorCode::invalid_argument, "fd grid size m must be a multiple of 4");
        }
        const TimeStepping steps{params.dt_ratio, params.dt_max};
        for (int m : {params.m, 3 * params.m / 4, params.m / 2}) {
            fd_levels_.push_back(std::make_shared<const FdKernel>(
                discretize_radial(space, params.r_max, m, a), params.t0, steps));
        }
        cache_ = std::make_shared<FdCache>();
    }
    if (method == KernelMethod::spectral_series && space.kind() == SpaceKind::gaussian) {
        throw Error(ErrorCode::kind_mismatch, "the zonal series needs a sphere factor");
    }
}

double fd_extrapolate(double fine, double mid, double coarse) {
    if (!(fine > 0.0 && mid > 0.0 && coarse > 0.0)) return fine;
    // Weights of the interpolant at h^2 = 0 through h^2 = 1, 16/9, 4 (in units of h^2).
    return std::exp((64.0 * std::log(fine) - 48.6 * std::log(mid) + 5.6 * std::log(coarse)) / 21.0);
}

const FdKernel& HeatKernel::fd_level(int level) const {
    if (fd_levels_.empty()) throw Error(ErrorCode::kind_mismatch, "kernel is not an FD kernel");
    return *fd_levels_.at(static_cast<std::size_t>(level));
}

const FdKernel& HeatKernel::fd() const {
    if (fd_levels_.empty()) throw Error(ErrorCode::kind_mismatch, "kernel is not an FD kernel");
    return *fd_levels_.front();
}

void HeatKernel::prefetch(std::span<const double> times) const {
    if (fd_levels_.empty()) throw Error(ErrorCode::kind_mismatch, "kernel is not an FD kernel");
    std::vector<double> missing;
    {
        std::lock_guard lock(cache_->mutex);
        for (double t : times) {
            if (!cache_->profiles.count(t)) missing.push_back(t);
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (missing.empty()) return;
    std::vector<std::vector<std::vector<double>>> per_level;
    for (const auto& level : fd_levels_) per_level.push_back(level->profiles(missing));
    std::lock_guard lock(cache_->mutex);
    for (std::size_t j = 0; j < missing.size(); ++j) {
        std::vector<std::vector<double>> entry;
        for (auto& level : per_level) entry.push_back(std::move(level[j]));
        cache_->profiles.emplace(missing[j], std::move(entry));
    }
}

KernelValue HeatKernel::evaluate(const Point& x, const Point& y, double t) const {
    return evaluate(space_.separation(x, y), t);
}

KernelValue HeatKernel::fd_value(double radius, double t) const {
    if (!(t > params_.t0)) {
        throw Error(ErrorCode::invalid_argument,
                    "fd kernel needs t > t0 = " + std::to_string(params_.t0));
    }
    const double times[] = {t};
    prefetch(times);
    const std::vector<std::vector<double>>* profiles = nullptr;
    {
        std::lock_guard lock(cache_->mutex);
        profiles = &cache_->profiles.at(t);  // map nodes are stable
    }
    double v[3];
    for (int k = 0; k < 3; ++k) v[k] = fd_levels_[k]->interpolate((*profiles)[k], radius);
    KernelValue out;
    out.value = fd_extrapolate(v[0], v[1], v[2]);
    out.log_value = out.value > 0.0 ? std::log(out.value) : -INFINITY;
    if (v[0] > 0.0 && v[2] > 0.0) {
        // Difference to the two-grid (h, 2h) extrapolation.
        out.error = std::abs(out.value - std::exp((4.0 * std::log(v[0]) - std::log(v[2])) / 3.0));
    } else {
        out.error = std::abs(v[0] - v[2]) / 3.0;
    }
    out.relative_error = out.value > 0.0 ? out.error / out.value : INFINITY;
    return out;
}

KernelValue HeatKernel::evaluate(const Separation& s, double t) const {
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "heat kernel needs t > 0");
    const int n = space_.dimension();
    const double damping = -a_ * space_.sup_scalar_curvature() * t;

    if (method_ == KernelMethod::fd_dirichlet) return fd_value(s.primary, t);

    const auto sphere_factor = [&](int k, double radius, double angle) {
        const double tau = t / (radius * radius);
        if (method_ == KernelMethod::spectral_series) {
            return sphere_kernel_series(k, radius, angle, t, params_.epsilon, params_.l_max,
                                        params_.t_min);
        }
        if (has_sphere_image_formula(k) && tau < kImageSwitch) {
            return sphere_kernel_image(k, radius, angle, t);
        }
        const double t_min = has_sphere_image_formula(k) ? 0.0 : params_.t_min;
        return sphere_kernel_series(k, radius, angle, t, params_.epsilon, params_.l_max, t_min);
    };

    switch (space_.kind()) {
        case SpaceKind::gaussian: return euclidean_kernel(n, s.primary, t);
        case SpaceKind::sphere:
            return scale_log(sphere_factor(n, *space_.sphere_radius(), s.primary), damping);
        case SpaceKind::cylinder: {
            const KernelValue sphere = sphere_factor(n - 1, *space_.sphere_radius(), s.primary);
            return scale_log(product(sphere, euclidean_kernel(1, s.line, t)), damping);
        }
    }
    return {};
}

}  // namespace solitonlab
