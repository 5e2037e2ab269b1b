#include "solitonlab/trials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

// Truncation of e^{-rho^2/4}-type tails: 12 standard widths of sqrt(2).
constexpr double kTailCut = 12.0 * std::numbers::sqrt2;

double bump(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double v = 1.0 - u * u;
    return v * v;
}

double bump_slope(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return -4.0 * u * (1.0 - u * u);
}

}  // namespace

quad::Result integrate_profile(const SolitonSpace& space, const quad::Integrand& g, double lo,
                               double hi, const std::vector<double>& breaks, double abs_tol,
                               double rel_tol) {
    const auto [range_lo, range_hi] = space.profile_range();
    lo = std::max(lo, range_lo);
    hi = std::min(hi, range_hi);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::invalid_argument, "profile integral needs a finite range");
    }
    if (hi <= lo) return {};
    std::vector<double> nodes = breaks;
    if (space.kind() == SpaceKind::cylinder) nodes.push_back(0.0);
    const auto integrand = [&](double rho) { return g(rho) * space.profile_weight(rho); };
    return quad::integrate_pieces(integrand, lo, hi, nodes, abs_tol, rel_tol);
}

double TrialFunction::gradient_norm(double rho) const {
    return std::abs(scale * profile.slope(rho));
}

double l2_norm_sq(const SolitonSpace& space, const TrialFunction& trial) {
    const auto sq = [&](double rho) {
        const double v = trial(rho);
        return v * v;
    };
    return integrate_profile(space, sq, trial.profile.lo, trial.profile.hi, trial.profile.breaks)
        .value;
}

TrialFunction normalize_l2(const SolitonSpace& space, TrialFunction trial) {
    trial.scale = 1.0;
    const double mass = l2_norm_sq(space, trial);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw Error(ErrorCode::normalization_failure, "trial function has zero L2 norm");
    }
    trial.scale = 1.0 / std::sqrt(mass);
    return trial;
}

TrialFunction random_bump_trial(const SolitonSpace& space, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto [range_lo, range_hi] = space.profile_range();
    const bool bounded = std::isfinite(range_hi);
    const double span = bounded ? range_hi : 4.0;

    struct Term {
        double center, width, amplitude;
    };
    const int count = 1 + static_cast<int>(unit(rng) * 3.0);
    std::vector<Term> terms;
    double lo = INFINITY;
    double hi = -INFINITY;
    std::vector<double> breaks;
    for (int i = 0; i < count; ++i) {
        Term t{};
        // Log-uniform widths cover both Euclidean-looking and space-filling bumps.
        t.width = std::exp(std::log(0.05 * span) + unit(rng) * std::log(40.0));
        if (space.kind() == SpaceKind::cylinder) {
            t.center = (2.0 * unit(rng) - 1.0) * span;
        } else {
            t.center = unit(rng) * 0.7 * span;
        }
        t.amplitude = 0.2 + unit(rng);
        terms.push_back(t);
        lo = std::min(lo, t.center - t.width);
        hi = std::max(hi, t.center + t.width);
        breaks.push_back(t.center - t.width);
        breaks.push_back(t.center);
        breaks.push_back(t.center + t.width);
    }
    lo = std::max(lo, range_lo);
    hi = std::min(hi, range_hi);

    TrialFunction trial;
    trial.center = space.origin();
    trial.width = terms.front().width;
    trial.cutoff = hi;
    trial.profile.lo = lo;
    trial.profile.hi = hi;
    trial.profile.breaks = breaks;
    trial.profile.value = [terms](double rho) {
        double s = 0.0;
        for (const Term& t : terms) s += t.amplitude * bump((rho - t.center) / t.width);
        return s;
    };
    trial.profile.slope = [terms](double rho) {
        double s = 0.0;
        for (const Term& t : terms) s += t.amplitude * bump_slope((rho - t.center) / t.width) / t.width;
        return s;
    };
    return trial;
}

TrialFunction gaussian_density_trial(const SolitonSpace& space, double tau) {
    if (space.kind() != SpaceKind::gaussian) {
        throw Error(ErrorCode::kind_mismatch, "gaussian density trial needs the gaussian soliton");
    }
    if (!(tau > 0.0)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
    const double n = space.dimension();
    const double amp = std::pow(4.0 * std::numbers::pi * tau, -n / 4.0);
    TrialFunction trial;
    trial.center = space.origin();
    trial.width = std::sqrt(2.0 * tau);
    trial.cutoff = std::sqrt(4.0 * tau * 80.0);
    trial.profile.lo = 0.0;
    trial.profile.hi = trial.cutoff;
    trial.profile.breaks = {trial.width, 4.0 * trial.width};
    trial.profile.value = [amp, tau](double rho) { return amp * std::exp(-rho * rho / (8.0 * tau)); };
    trial.profile.slope = [amp, tau](double rho) {
        return -amp * rho / (4.0 * tau) * std::exp(-rho * rho / (8.0 * tau));
    };
    return trial;
}

TrialFunction constant_trial(const SolitonSpace& space) {
    const auto volume = space.total_volume();
    if (!volume) throw Error(ErrorCode::kind_mismatch, "constant trial needs a compact space");
    const double c = 1.0 / std::sqrt(*volume);
    TrialFunction trial;
    trial.center = space.origin();
    trial.width = space.profile_range().second;
    trial.cutoff = trial.width;
    trial.profile.lo = 0.0;
    trial.profile.hi = trial.cutoff;
    trial.profile.value = [c](double) { return c; };
    trial.profile.slope = [](double) { return 0.0; };
    return trial;
}

TrialFunction aubin_talenti_trial(const SolitonSpace& space, double lambda, double cutoff) {
    if (space.kind() != SpaceKind::gaussian || space.dimension() < 3) {
        throw Error(ErrorCode::invalid_argument, "Aubin-Talenti profile needs gaussian:n, n >= 3");
    }
    const double p = 0.5 * (space.dimension() - 2);
    const auto base = [lambda, p](double rho) {
        const double u = rho / lambda;
        return std::pow(1.0 + u * u, -p);
    };
    const double floor = base(cutoff);
    TrialFunction trial;
    trial.center = space.origin();
    trial.width = lambda;
    trial.cutoff = cutoff;
    trial.profile.lo = 0.0;
    trial.profile.hi = cutoff;
    trial.profile.breaks = {lambda, 10.0 * lambda};
    trial.profile.value = [base, floor, cutoff](double rho) {
        return rho >= cutoff ? 0.0 : base(rho) - floor;
    };
    trial.profile.slope = [lambda, p, cutoff](double rho) {
        if (rho >= cutoff) return 0.0;
        const double u = rho / lambda;
        return -2.0 * p * u / lambda * std::pow(1.0 + u * u, -p - 1.0);
    };
    return trial;
}

TrialFunction dilate(const TrialFunction& trial, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "dilation must be positive");
    TrialFunction out = trial;
    out.width *= lambda;
    out.cutoff *= lambda;
    out.profile.lo *= lambda;
    out.profile.hi *= lambda;
    for (double& b : out.profile.breaks) b *= lambda;
    const auto value = trial.profile.value;
    const auto slope = trial.profile.slope;
    out.profile.value = [value, lambda](double rho) { return value(rho / lambda); };
    out.profile.slope = [slope, lambda](double rho) { return slope(rho / lambda) / lambda; };
    return out;
}

double LogDensityTrial::value(const SolitonSpace& space, double rho) const {
    return space.profile_potential(rho) + shift + amplitude * perturbation.value(rho);
}

double LogDensityTrial::slope(const SolitonSpace& space, double rho) const {
    return space.profile_potential_derivative(rho) + amplitude * perturbation.slope(rho);
}

namespace {

std::pair<double, double> log_density_range(const SolitonSpace& space) {
    const auto [lo, hi] = space.profile_range();
    return {std::isfinite(lo) ? lo : -kTailCut, std::isfinite(hi) ? hi : kTailCut};
}

}  // namespace

LogDensityTrial normalize_log_density(const SolitonSpace& space, LogDensityTrial trial,
                                      double tau) {
    if (!(tau > 0.0)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
    const double n = space.dimension();
    const double pre = std::pow(4.0 * std::numbers::pi * tau, -0.5 * n);
    trial.shift = 0.0;
    const auto [lo, hi] = log_density_range(space);
    const auto density = [&](double rho) { return pre * std::exp(-trial.value(space, rho)); };
    const double z = integrate_profile(space, density, lo, hi, trial.perturbation.breaks, 1e-15, 1e-13).value;
    trial.shift = std::log(z);
    return trial;
}

LogDensityTrial potential_log_density(const SolitonSpace& space, double tau) {
    LogDensityTrial trial;
    trial.perturbation.value = [](double) { return 0.0; };
    trial.perturbation.slope = [](double) { return 0.0; };
    return normalize_log_density(space, trial, tau);
}

LogDensityTrial random_log_density(const SolitonSpace& space, std::mt19937_64& rng,
                                   double max_amplitude) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LogDensityTrial trial;
    trial.amplitude = max_amplitude * (2.0 * unit(rng) - 1.0);

    if (space.kind() == SpaceKind::sphere) {
        // Cosine modes in the polar angle are smooth functions on the sphere.
        const double r = *space.sphere_radius();
        std::vector<double> coef(1 + static_cast<int>(unit(rng) * 4.0));
        for (double& c : coef) c = 2.0 * unit(rng) - 1.0;
        trial.perturbation.value = [coef, r](double rho) {
            double s = 0.0;
            for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * std::cos((k + 1) * rho / r);
            return s;
        };
        trial.perturbation.slope = [coef, r](double rho) {
            double s = 0.0;
            for (std::size_t k = 0; k < coef.size(); ++k) {
                s -= coef[k] * (k + 1) / r * std::sin((k + 1) * rho / r);
            }
            return s;
        };
    } else {
        // Gaussian bumps; mirrored about rho = 0 on the gaussian soliton so the
        // radial function stays smooth at the origin.
        const bool mirror = space.kind() == SpaceKind::gaussian;
        struct Term {
            double center, width, weight;
        };
        std::vector<Term> terms(1 + static_cast<int>(unit(rng) * 3.0));
        for (Term& t : terms) {
            t.center = mirror ? 4.0 * unit(rng) : 8.0 * unit(rng) - 4.0;
            t.width = 0.3 + 2.0 * unit(rng);
            t.weight = 2.0 * unit(rng) - 1.0;
            trial.perturbation.breaks.push_back(t.center);
        }
        const auto g = [](double x, const Term& t) {
            const double u = (x - t.center) / t.width;
            return t.weight * std::exp(-0.5 * u * u);
        };
        const auto dg = [](double x, const Term& t) {
            const double u = (x - t.center) / t.width;
            return -t.weight * u / t.width * std::exp(-0.5 * u * u);
        };
        trial.perturbation.value = [terms, g, mirror](double rho) {
            double s = 0.0;
            for (const Term& t : terms) s += g(rho, t) + (mirror ? g(-rho, t) : 0.0);
            return s;
        };
        trial.perturbation.slope = [terms, dg, mirror](double rho) {
            double s = 0.0;
            for (const Term& t : terms) s += dg(rho, t) - (mirror ? dg(-rho, t) : 0.0);
            return s;
        };
    }
    return normalize_log_density(space, trial, 1.0);
}

}  // namespace solitonlab
