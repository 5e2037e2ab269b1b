#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/kernels.hpp"
#include "solitonlab/quadrature.hpp"

namespace solitonlab {

GreenFunction::GreenFunction(SolitonSpace space, double a, KernelParams params)
    : kernel_(space, a, KernelMethod::closed_form, params),
      spectral_floor_(a * space.sup_scalar_curvature()) {
    if (space.dimension() < 3) {
        throw Error(ErrorCode::dimension_out_of_range, "Green function is evaluated for n >= 3");
    }
}

GreenValue GreenFunction::evaluate(const Point& x, const Point& y) const {
    return evaluate(space().separation(x, y));
}

GreenValue GreenFunction::evaluate(const Separation& s) const {
    const double r = space().separation_distance(s);
    if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "Green function is singular at x = y");
    const double r2 = r * r;
    const auto h = [&](double t) { return t > 0.0 ? kernel_.evaluate(s, t).value : 0.0; };

    // [0, r^2]: the integrand vanishes to all orders at t = 0 and peaks near r^2 / 2n.
    const double inner_breaks[] = {1e-3 * r2, 1e-2 * r2, 0.1 * r2};
    quad::Result head = quad::integrate_pieces(h, 0.0, r2, inner_breaks, 1e-300, 1e-12);
    GreenValue out{head.value, head.error};

    if (space().kind() == SpaceKind::gaussian) {
        // t = r^4 / s maps [r^2, inf) onto (0, r^2]; the integrand behaves like
        // s^{n/2 - 2} at s = 0, which the double-exponential rule absorbs.
        const double r4 = r2 * r2;
        const auto tail = [&](double sv) {
            const double t = r4 / sv;
            if (!(sv > 0.0) || !std::isfinite(t)) return 0.0;
            // H r^4 / s^2 = H t^2 / r^4 overflows as a product for small s.
            return std::exp(kernel_.evaluate(s, t).log_value + 2.0 * std::log(t) - 2.0 * std::log(r2));
        };
        const quad::Result t = quad::integrate_singular(tail, 0.0, r2, 1e-12);
        out.value += t.value;
        out.error += t.error;
        return out;
    }

    // Compact and cylinder spaces: H(x, y, t) <= H(x, x, T) e^{-lambda_1 (t - T)} for
    // t >= T, so the tail beyond T is at most H(x, x, T) / lambda_1.
    if (!(spectral_floor_ > 0.0)) {
        throw Error(ErrorCode::divergence,
                    "time integral diverges: the bottom of the spectrum of L is zero");
    }
    const Separation diagonal{};
    double lo = r2;
    for (int segment = 0; segment < 200; ++segment) {
        const double hi = 2.0 * lo;
        const quad::Result piece = quad::integrate(h, lo, hi, 1e-300, 1e-12);
        out.value += piece.value;
        out.error += piece.error;
        const double bound = kernel_.evaluate(diagonal, hi).value / spectral_floor_;
        if (bound < 1e-12 * out.value) {
            out.error += bound;
            return out;
        }
        lo = hi;
    }
    throw Error(ErrorCode::convergence_failure, "Green tail did not converge within 200 doublings");
}

VolumeGrowth volume_growth_integral(const SolitonSpace& space, const Point& p, double t_max) {
    (void)p;  // catalogue spaces are homogeneous: V_p(t) does not depend on p
    if (!(t_max > 1.0)) throw Error(ErrorCode::invalid_argument, "T_max must exceed 1");
    const auto g = [&](double t) { return t / space.ball_volume(t); };
    VolumeGrowth out;
    double last = 0.0;
    // Doubling segments [2^j, 2^{j+1}] clipped at T_max; the last one is [T_max/2, T_max].
    double lo = 1.0;
    while (lo < t_max) {
        const double hi = std::min(2.0 * lo, t_max);
        out.value += quad::integrate(g, lo, hi, 1e-14, 1e-12).value;
        lo = hi;
    }
    last = quad::integrate(g, 0.5 * t_max, t_max, 1e-14, 1e-12).value;
    out.divergent = last > 1e-3 * out.value;
    return out;
}

}  // namespace solitonlab
