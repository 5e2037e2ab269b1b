#include "solitonlab/entropy.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailCut = 12.0 * std::numbers::sqrt2;

std::pair<double, double> truncated_range(const SolitonSpace& space) {
    const auto [lo, hi] = space.profile_range();
    return {std::isfinite(lo) ? lo : -kTailCut, std::isfinite(hi) ? hi : kTailCut};
}

// Bound on the dropped tail of int e^{-f} dv beyond |rho| = kTailCut.
double partition_tail_bound(const SolitonSpace& space) {
    const int n = space.dimension();
    switch (space.kind()) {
        case SpaceKind::gaussian:
            // |S^{n-1}| int_L^inf rho^{n-1} e^{-rho^2/4} = |S^{n-1}| 2^{n-1} Gamma(n/2, L^2/4)
            return unit_sphere_area(n - 1) * std::pow(2.0, n - 1) *
                   boost::math::tgamma(0.5 * n, 0.25 * kTailCut * kTailCut);
        case SpaceKind::cylinder:
            return space.profile_weight(0.0) * std::exp(-0.5 * (n - 1)) * 2.0 * std::sqrt(kPi) *
                   std::erfc(0.5 * kTailCut);
        case SpaceKind::sphere: return 0.0;
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(EntropyMethod method) {
    return method == EntropyMethod::closed_form ? "closed_form" : "quadrature";
}

double mu_closed_form(const SolitonSpace& space) {
    const int n = space.dimension();
    switch (space.kind()) {
        case SpaceKind::gaussian: return 0.0;
        case SpaceKind::sphere:
            // e^mu = (4 pi)^{-n/2} e^{-n/2} V
            return -0.5 * n * std::log(4.0 * kPi) - 0.5 * n + std::log(*space.total_volume());
        case SpaceKind::cylinder: {
            // e^mu = (4 pi)^{-n/2} e^{-(n-1)/2} |S^{n-1}_r| sqrt(4 pi)
            const double sphere_factor = unit_sphere_area(n - 1) * std::pow(*space.sphere_radius(), n - 1);
            return -0.5 * (n - 1) * std::log(4.0 * kPi) - 0.5 * (n - 1) + std::log(sphere_factor);
        }
    }
    return 0.0;
}

EntropyReport mu(const SolitonSpace& space) {
    EntropyReport report;
    report.mu = mu_closed_form(space);
    report.method = EntropyMethod::closed_form;

    const double pre = std::pow(4.0 * kPi, -0.5 * space.dimension());
    const auto density = [&](double rho) { return pre * std::exp(-space.profile_potential(rho)); };
    const auto [lo, hi] = truncated_range(space);
    const quad::Result z = integrate_profile(space, density, lo, hi, {}, 1e-15, 1e-14);
    report.quadrature_error = z.error + pre * partition_tail_bound(space);
    report.quadrature_mu = std::log(z.value);
    report.normalization_check = z.value - std::exp(report.mu);
    return report;
}

double w_entropy(const SolitonSpace& space, const LogDensityTrial& phi, double tau) {
    if (!(tau > 0.0)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
    const int n = space.dimension();
    const double pre = std::pow(4.0 * kPi * tau, -0.5 * n);
    const double r = space.sup_scalar_curvature();
    const auto [lo, hi] = truncated_range(space);

    const auto density = [&](double rho) { return pre * std::exp(-phi.value(space, rho)); };
    const double mass = integrate_profile(space, density, lo, hi, phi.perturbation.breaks, 1e-15, 1e-13).value;
    if (std::abs(mass - 1.0) > kLogDensityNormalizationTol) {
        throw Error(ErrorCode::normalization_failure,
                    "log-density integrates to " + std::to_string(mass) + ", expected 1");
    }
    const auto integrand = [&](double rho) {
        const double g = phi.slope(space, rho);
        return (tau * (g * g + r) + phi.value(space, rho) - n) * density(rho);
    };
    return integrate_profile(space, integrand, lo, hi, phi.perturbation.breaks, 1e-14, 1e-13).value;
}

double minimizer_check(const SolitonSpace& space) {
    return std::abs(w_entropy(space, potential_log_density(space, 1.0), 1.0) - mu_closed_form(space));
}

}  // namespace solitonlab
