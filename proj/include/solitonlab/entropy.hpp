#pragma once

// Perelman's entropy on the catalogue spaces.
//
//   W(g, phi, tau) = int [tau (|grad phi|^2 + R) + phi - n] (4 pi tau)^{-n/2} e^{-phi} dv
//   mu(g, 1)       = inf W(g, phi, 1) over   int (4 pi)^{-n/2} e^{-phi} dv = 1
//
// f + c attains the infimum on a shrinker, which gives the closed form
// e^mu = (4 pi)^{-n/2} int e^{-f} dv used below.

#include "solitonlab/spaces.hpp"
#include "solitonlab/trials.hpp"

namespace solitonlab {

enum class EntropyMethod { closed_form, quadrature };

std::string_view to_string(EntropyMethod method);

struct EntropyReport {
    double mu = 0.0;
    EntropyMethod method = EntropyMethod::closed_form;
    double quadrature_mu = 0.0;
    /// Quadrature error of the partition integral plus the truncated tail bound.
    double quadrature_error = 0.0;
    /// int (4 pi)^{-n/2} e^{-f} dv - e^mu, evaluated by quadrature.
    double normalization_check = 0.0;
};

double mu_closed_form(const SolitonSpace& space);

/// Closed-form mu with an independent quadrature of the partition integral.
EntropyReport mu(const SolitonSpace& space);

/// Tolerance for |int (4 pi tau)^{-n/2} e^{-phi} dv - 1| accepted by w_entropy.
inline constexpr double kLogDensityNormalizationTol = 1e-8;

/// W(g, phi, tau) by quadrature in the profile coordinate.
double w_entropy(const SolitonSpace& space, const LogDensityTrial& phi, double tau);

/// |W(g, f + c, 1) - mu|.
double minimizer_check(const SolitonSpace& space);

}  // namespace solitonlab
