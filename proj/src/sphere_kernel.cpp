#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/kernels.hpp"
#include "solitonlab/quadrature.hpp"

namespace solitonlab {

namespace {

constexpr double kPi = std::numbers::pi;

KernelValue from_log(double log_value, double rel_error) {
    KernelValue out;
    out.log_value = log_value;
    out.value = std::exp(log_value);
    out.error = rel_error * out.value;
    out.relative_error = rel_error;
    return out;
}

int image_count(double tau) {
    // Images with |phi + 2 pi k| beyond sqrt(160 tau) + 2pi carry weight below e^{-40}.
    return static_cast<int>(std::ceil(std::sqrt(160.0 * tau) / (2.0 * kPi))) + 2;
}

// Unit S^2. With c = cos(theta) the Mehler-type representation
//   K(theta, tau) = sqrt(2) e^{tau/4} (4 pi tau)^{-3/2}
//                   * int_theta^pi G(phi) / sqrt(cos theta - cos phi) dphi,
//   G(phi) = sum_k (-1)^k (phi + 2 pi k) e^{-(phi + 2 pi k)^2 / 4 tau}
// becomes, under cos phi = (c-1)/2 - (c+1)/2 cos beta, a smooth integral over
// beta in [0, pi] with dphi / sqrt(c - cos phi) = dbeta / sqrt(1 - cos phi).
// e^{-theta^2/4tau} is factored out so the result is returned as a logarithm.
KernelValue unit_s2_image(double theta, double tau) {
    const int images = image_count(tau);
    const double half = 0.5 * theta;
    const double ch2 = std::cos(half) * std::cos(half);
    const double sh2 = std::sin(half) * std::sin(half);
    const double th2 = theta * theta;
    const auto scaled_g = [&](double phi) {
        double s = 0.0;
        for (int k = -images; k <= images; ++k) {
            const double u = phi + 2.0 * kPi * k;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            s += sign * u * std::exp(-(u - theta) * (u + theta) / (4.0 * tau));
        }
        return s;
    };
    const auto integrand = [&](double beta) {
        const double cb = std::cos(0.5 * beta);
        // sin^2(phi/2) = cos^2(beta/2) cos^2(theta/2) + sin^2(theta/2), free of cancellation.
        double s = std::sqrt(std::min(1.0, cb * cb * ch2 + sh2));
        s = std::max(s, 5e-7);
        const double phi = 2.0 * std::asin(s);
        return scaled_g(phi) / (std::numbers::sqrt2 * s);
    };
    const double width = std::sqrt(tau);
    std::vector<double> breaks;
    for (double c : {8.0, 2.0, 0.5}) breaks.push_back(kPi - c * width);
    const quad::Result r = quad::integrate_pieces(integrand, 0.0, kPi, breaks, 1e-300, 1e-13);
    if (!(r.value > 0.0)) {
        throw Error(ErrorCode::convergence_failure, "S^2 image integral is not positive");
    }
    const double log_value = 0.5 * std::log(2.0) + 0.25 * tau - 1.5 * std::log(4.0 * kPi * tau) -
                             th2 / (4.0 * tau) + std::log(r.value);
    return from_log(log_value, r.error / r.value + 1e-14);
}

// Unit S^3:  K(theta, tau) = e^tau (4 pi tau)^{-3/2} sum_k (theta + 2 pi k) / sin(theta)
//                            * e^{-(theta + 2 pi k)^2 / 4 tau}.
// Near the poles of sin(theta) the quotient is replaced by its l'Hopital limit.
KernelValue unit_s3_image(double theta, double tau) {
    const int images = image_count(tau);
    const double th2 = theta * theta;
    const double sn = std::sin(theta);
    double sum = 0.0;
    double magnitude = 0.0;
    if (std::abs(sn) < 1e-7) {
        for (int k = -images; k <= images; ++k) {
            const double u = theta + 2.0 * kPi * k;
            const double term = (1.0 - u * u / (2.0 * tau)) * std::exp(-(u - theta) * (u + theta) / (4.0 * tau));
            sum += term;
            magnitude += std::abs(term);
        }
        sum /= std::cos(theta);
    } else {
        for (int k = -images; k <= images; ++k) {
            const double u = theta + 2.0 * kPi * k;
            const double term = u * std::exp(-(u - theta) * (u + theta) / (4.0 * tau));
            sum += term;
            magnitude += std::abs(term);
        }
        sum /= sn;
        magnitude /= std::abs(sn);
    }
    if (!(sum > 0.0)) throw Error(ErrorCode::convergence_failure, "S^3 image sum is not positive");
    const double log_value = tau - 1.5 * std::log(4.0 * kPi * tau) - th2 / (4.0 * tau) + std::log(sum);
    return from_log(log_value, 8.0 * DBL_EPSILON * (1.0 + magnitude / sum) + 1e-15);
}

}  // namespace

KernelValue euclidean_kernel(int n, double distance, double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "heat kernel needs t > 0");
    const double e = distance * distance / (4.0 * t);
    const double log_value = -0.5 * n * std::log(4.0 * kPi * t) - e;
    return from_log(log_value, 4.0 * DBL_EPSILON * (1.0 + e));
}

bool has_sphere_image_formula(int k) { return k == 2 || k == 3; }

KernelValue sphere_kernel_image(int k, double radius, double angle, double t) {
    if (!has_sphere_image_formula(k)) {
        throw Error(ErrorCode::invalid_argument, "image representation exists for S^2 and S^3 only");
    }
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "heat kernel needs t > 0");
    const double theta = std::clamp(angle, 0.0, kPi);
    const double tau = t / (radius * radius);
    KernelValue v = k == 2 ? unit_s2_image(theta, tau) : unit_s3_image(theta, tau);
    // K_r(theta, t) = r^{-k} K_1(theta, t / r^2).
    return from_log(v.log_value - k * std::log(radius), v.relative_error);
}

KernelValue sphere_kernel_series(int k, double radius, double angle, double t, double epsilon,
                                 int l_max, double t_min) {
    if (k < 1) throw Error(ErrorCode::dimension_out_of_range, "sphere factor needs k >= 1");
    if (!(t > 0.0) || t < t_min) {
        throw Error(ErrorCode::invalid_argument,
                    "zonal series needs t >= t_min = " + std::to_string(t_min));
    }
    if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "series tolerance must be > 0");
    const double volume = unit_sphere_area(k) * std::pow(radius, k);
    const double tau = t / (radius * radius);
    const double x = std::cos(std::clamp(angle, 0.0, kPi));
    const double alpha = 0.5 * (k - 1);

    double z_prev = 1.0;  // Z_{l-1}
    double z = 1.0;       // Z_l
    double binom = 1.0;   // C(l + k - 2, l); dim_l = (2l + k - 1)/(k - 1) * binom for k >= 2
    double sum = 0.0;
    double abs_sum = 0.0;
    double prev_bound = INFINITY;
    for (int l = 0; l <= l_max; ++l) {
        if (l == 1) {
            z_prev = 1.0;
            z = x;
        } else if (l >= 2) {
            const int j = l - 1;
            const double next = (2.0 * (j + alpha) * x * z - j * z_prev) / (j + 2.0 * alpha);
            z_prev = z;
            z = next;
        }
        if (l >= 1) binom *= (l + k - 2.0) / l;
        double dim;
        if (k == 1) {
            dim = l == 0 ? 1.0 : 2.0;
        } else {
            dim = (2.0 * l + k - 1.0) / (k - 1.0) * binom;
        }
        const double bound = dim * std::exp(-l * (l + k - 1.0) * tau) / volume;
        const double term = bound * z;
        sum += term;
        abs_sum += std::abs(term);
        if (bound < epsilon && bound < prev_bound && l > 0) {
            // Term bounds decay at least geometrically past their peak, with
            // ratio no larger than the next one.
            const double nl = l + 1.0;
            const double next_dim =
                k == 1 ? 2.0 : (2.0 * nl + k - 1.0) / (k - 1.0) * binom * (nl + k - 2.0) / nl;
            const double next = next_dim * std::exp(-nl * (nl + k - 1.0) * tau) / volume;
            const double q = next / bound;
            const double tail = q < 1.0 ? next / (1.0 - q) : next * l_max;
            KernelValue out;
            out.value = sum;
            out.log_value = sum > 0.0 ? std::log(sum) : -INFINITY;
            out.error = tail + DBL_EPSILON * (2.0 + std::sqrt(static_cast<double>(l))) * abs_sum;
            out.relative_error = sum > 0.0 ? out.error / sum : INFINITY;
            return out;
        }
        prev_bound = bound;
    }
    throw Error(ErrorCode::convergence_failure,
                "zonal series did not reach tolerance within l_max = " + std::to_string(l_max));
}

}  // namespace solitonlab
