#pragma once

#include <functional>
#include <span>

namespace solitonlab::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

using Integrand = std::function<double(double)>;

/// Adaptive 31-point Gauss-Kronrod on a finite interval. The target
/// max(abs_tol, rel_tol * |value|) is set from the whole interval and halved
/// with each bisection; a piece also stops once splitting no longer lowers
/// its error estimate (the integrand's rounding floor).
Result integrate(const Integrand& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-12, unsigned max_depth = 18);

/// Same as integrate(), but splits [a, b] at the given interior breakpoints
/// (sorted; points outside (a, b) are ignored). The relative target refers to
/// the sum over all pieces. Errors add.
Result integrate_pieces(const Integrand& f, double a, double b, std::span<const double> breaks,
                        double abs_tol = 1e-12, double rel_tol = 1e-12);

/// Double-exponential rule for integrands with integrable endpoint singularities.
Result integrate_singular(const Integrand& f, double a, double b, double tol = 1e-12);

}  // namespace solitonlab::quad
