#pragma once

// Test functions that depend only on the profile coordinate of a space (see
// spaces.hpp). Every catalogue space is homogeneous, so a function of the
// distance to one fixed center loses no generality for the functional
// inequalities checked here.

#include <functional>
#include <random>
#include <vector>

#include "solitonlab/quadrature.hpp"
#include "solitonlab/spaces.hpp"

namespace solitonlab {

struct Profile {
    std::function<double(double)> value;
    std::function<double(double)> slope;  // d/drho
    double lo = 0.0;                      // support in the profile coordinate
    double hi = 0.0;
    std::vector<double> breaks;           // kinks or support ends inside [lo, hi]
};

/// Integral of g(rho) * profile_weight(rho) over [lo, hi] ∩ profile_range().
quad::Result integrate_profile(const SolitonSpace& space, const quad::Integrand& g, double lo,
                               double hi, const std::vector<double>& breaks = {},
                               double abs_tol = 1e-13, double rel_tol = 1e-12);

/// A compactly supported Lipschitz test function centered at `center`.
struct TrialFunction {
    Point center;
    double width = 1.0;   // characteristic length
    double cutoff = 1.0;  // support radius measured from the center
    Profile profile;
    double scale = 1.0;

    double operator()(double rho) const { return scale * profile.value(rho); }
    double gradient_norm(double rho) const;
};

/// Rescales so that the integral of phi^2 equals 1.
TrialFunction normalize_l2(const SolitonSpace& space, TrialFunction trial);
double l2_norm_sq(const SolitonSpace& space, const TrialFunction& trial);

/// Sum of one to three C^1 bumps (1 - u^2)^2 with random centers, widths and
/// amplitudes, clipped to the profile range. Not normalised.
TrialFunction random_bump_trial(const SolitonSpace& space, std::mt19937_64& rng);

/// Gaussian soliton only: phi^2 = (4 pi tau)^{-n/2} exp(-|x|^2 / (4 tau)),
/// truncated where it drops below 1e-300.
TrialFunction gaussian_density_trial(const SolitonSpace& space, double tau);

/// Sphere only: phi = V^{-1/2}.
TrialFunction constant_trial(const SolitonSpace& space);

/// (1 + (rho/lambda)^2)^{-(n-2)/2} minus its value at the cutoff, on the
/// Gaussian soliton. Extremal profile for the Euclidean Sobolev inequality.
TrialFunction aubin_talenti_trial(const SolitonSpace& space, double lambda, double cutoff);

/// phi(x) -> phi(x / lambda), i.e. support and width scale by lambda.
TrialFunction dilate(const TrialFunction& trial, double lambda);

/// Log-density perturbation for Perelman's W functional:
///   phi = f + shift + amplitude * p(rho).
struct LogDensityTrial {
    Profile perturbation;
    double amplitude = 0.0;
    double shift = 0.0;

    double value(const SolitonSpace& space, double rho) const;
    double slope(const SolitonSpace& space, double rho) const;
};

/// Picks `shift` so that  int (4 pi tau)^{-n/2} e^{-phi} dv = 1.
LogDensityTrial normalize_log_density(const SolitonSpace& space, LogDensityTrial trial, double tau);

/// phi = f + c with the canonical normalising constant.
LogDensityTrial potential_log_density(const SolitonSpace& space, double tau = 1.0);

/// Smooth bounded random perturbation; amplitude up to `max_amplitude`.
LogDensityTrial random_log_density(const SolitonSpace& space, std::mt19937_64& rng,
                                   double max_amplitude = 1.0);

}  // namespace solitonlab
