#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solitonlab/error.hpp"
#include "solitonlab/kernels.hpp"
#include "solitonlab/quadrature.hpp"

using namespace solitonlab;
using std::numbers::pi;

namespace {

double gauss(int n, double d, double t) { return std::pow(4.0 * pi * t, -0.5 * n) * std::exp(-d * d / (4.0 * t)); }

// Direct zonal sum on S^2 of radius r with the Legendre polynomials of the standard library.
double s2_oracle(double r, double theta, double t, int terms) {
    double s = 0.0;
    for (int l = 0; l < terms; ++l) {
        s += (2 * l + 1) * std::exp(-l * (l + 1) * t / (r * r)) * std::legendre(l, std::cos(theta));
    }
    return s / (4.0 * pi * r * r);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("Euclidean kernel values") {
    CHECK(euclidean_kernel(3, 0.0, 1.0).value == doctest::Approx(std::pow(4.0 * pi, -1.5)));
    CHECK(euclidean_kernel(3, 0.0, 1.0).value == doctest::Approx(0.0224484).epsilon(1e-5));
    CHECK(euclidean_kernel(1, 2.0, 1.0).value == doctest::Approx(0.103777).epsilon(1e-5));
    // Underflowed values keep their logarithm.
    const KernelValue far = euclidean_kernel(3, 100.0, 1e-3);
    CHECK(far.value == 0.0);
    CHECK(far.log_value == doctest::Approx(-1.5 * std::log(4e-3 * pi) - 2.5e6));
}

TEST_CASE("Euclidean kernel has unit mass") {
    for (int n : {1, 2, 3, 4}) {
        const double t = 0.7;
        const auto f = [&](double r) { return gauss(n, r, t) * unit_sphere_area(n - 1) * std::pow(r, n - 1); };
        const double mass = n == 1 ? 2.0 * quad::integrate(f, 0.0, 30.0).value / unit_sphere_area(0) * 1.0
                                   : quad::integrate(f, 0.0, 30.0).value;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("S^2 series against a direct Legendre sum") {
    const double r = std::sqrt(2.0);
    for (double theta : {0.0, 0.4, 1.5, 3.0}) {
        const double t = 0.5;
        const KernelValue v = sphere_kernel_series(2, r, theta, t, 1e-15, 2000, 1e-3);
        CHECK(v.value == doctest::Approx(s2_oracle(r, theta, t, 64)).epsilon(1e-10));
    }
    // Schroedinger damping at a = 1/4, R = 1.
    const HeatKernel k(SolitonSpace::parse("sphere:2"), 0.25, KernelMethod::spectral_series);
    CHECK(k.evaluate(Separation{0.0, 0.0}, 0.5).value ==
          doctest::Approx(std::exp(-0.125) * s2_oracle(r, 0.0, 0.5, 64)).epsilon(1e-10));
}

TEST_CASE("image representations agree with the series where both converge") {
    for (int k : {2, 3}) {
        const double r = std::sqrt(2.0 * (k - 1)) + 0.3;
        for (double theta : {0.0, 0.2, 1.0, 2.0, 3.1, pi}) {
            for (double t : {0.05, 0.3, 0.8}) {
                CAPTURE(k);
                CAPTURE(theta);
                CAPTURE(t);
                const double image = sphere_kernel_image(k, r, theta, t).value;
                const double series = sphere_kernel_series(k, r, theta, t, 1e-16, 4000, 1e-4).value;
                CHECK(image == doctest::Approx(series).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("sphere kernel limits") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const HeatKernel k(s2, 0.0, KernelMethod::closed_form);
    CHECK(k.evaluate(Separation{1.2, 0.0}, 60.0).value == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-12));
    // Short time: Euclidean to leading order on the diagonal.
    CHECK(k.evaluate(Separation{0.0, 0.0}, 1e-5).value == doctest::Approx(gauss(2, 0.0, 1e-5)).epsilon(1e-4));
    // Stochastic completeness: int H dv = 1 over S^2 of radius sqrt 2.
    const double t = 1.0;
    const auto f = [&](double theta) { return k.evaluate(Separation{theta, 0.0}, t).value * 2.0 * pi * 2.0 * std::sin(theta); };
    CHECK(quad::integrate(f, 0.0, pi).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zonal series refuses times below t_min") {
    CHECK_THROWS_AS(sphere_kernel_series(4, 2.0, 0.3, 1e-4, 1e-15, 2000, 1e-3), Error);
    const HeatKernel k(SolitonSpace::parse("sphere:4"), 0.25, KernelMethod::closed_form);
    CHECK_THROWS_AS(k.evaluate(Separation{0.1, 0.0}, 1e-4), Error);
}

TEST_CASE("cylinder kernel factorises") {
    const auto c3 = SolitonSpace::parse("cylinder:3");
    const HeatKernel k(c3, 0.25, KernelMethod::closed_form);
    const double r = std::sqrt(2.0);
    for (double t : {0.6, 2.0}) {
        const double expected = std::exp(-0.25 * t) * s2_oracle(r, 0.9, t, 80) * gauss(1, 1.3, t);
        CHECK(k.evaluate(Separation{0.9, 1.3}, t).value == doctest::Approx(expected).epsilon(1e-10));
    }
    // Large t on the diagonal: e^{-t/4} (1 / 8 pi) (4 pi t)^{-1/2}.
    const double t = 80.0;
    CHECK(k.evaluate(Separation{0.0, 0.0}, t).value ==
          doctest::Approx(std::exp(-0.25 * t) / (8.0 * pi) / std::sqrt(4.0 * pi * t)).epsilon(1e-10));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) {
        const Point x = c3.random_point(rng), y = c3.random_point(rng);
        CHECK(k.evaluate(x, y, 0.4).value == doctest::Approx(k.evaluate(y, x, 0.4).value).epsilon(1e-14));
    }
}

TEST_CASE("kernel is H_Laplace times e^{-a R t}") {
    const auto s3 = SolitonSpace::parse("sphere:3");
    const HeatKernel laplace(s3, 0.0, KernelMethod::closed_form);
    const HeatKernel schr(s3, 0.4, KernelMethod::closed_form);
    for (double t : {0.01, 0.3, 3.0}) {
        CHECK(schr.evaluate(Separation{0.7, 0.0}, t).value ==
              doctest::Approx(std::exp(-0.4 * 1.5 * t) * laplace.evaluate(Separation{0.7, 0.0}, t).value));
    }
}

TEST_CASE("FD Dirichlet kernel on gaussian:3") {
    const HeatKernel fd(SolitonSpace::parse("gaussian:3"), 0.25, KernelMethod::fd_dirichlet);
    const double times[] = {1.0};
    fd.prefetch(times);
    const KernelValue v = fd.evaluate(Separation{2.0, 0.0}, 1.0);
    CHECK(std::abs(v.value - std::pow(4.0 * pi, -1.5) * std::exp(-1.0)) <= 1e-3 * v.value);
    const auto profile = fd.fd().profiles(times);
    CHECK(fd.fd().mass(profile[0]) <= 1.0 + 1e-12);
    CHECK(fd.fd().interpolate(profile[0], 40.0) == 0.0);
    CHECK_THROWS_AS(fd.evaluate(Separation{1.0, 0.0}, 1e-4), Error);  // before the bootstrap time
}

TEST_CASE("FD configuration guards") {
    const auto g3 = SolitonSpace::parse("gaussian:3");
    KernelParams coarse;
    coarse.m = 256;  // h = 0.156 cannot resolve the bootstrap Gaussian at t0 = 1e-3
    CHECK_THROWS_AS(HeatKernel(g3, 0.0, KernelMethod::fd_dirichlet, coarse), Error);
    KernelParams odd;
    odd.m = 4098;
    CHECK_THROWS_AS(HeatKernel(g3, 0.0, KernelMethod::fd_dirichlet, odd), Error);
    KernelParams steps;
    steps.dt_ratio = 0.2;
    CHECK_THROWS_AS(HeatKernel(g3, 0.0, KernelMethod::fd_dirichlet, steps), Error);
    CHECK_THROWS_AS(HeatKernel(SolitonSpace::parse("sphere:2"), 0.0, KernelMethod::fd_dirichlet), Error);
}

TEST_CASE("log-space extrapolation is exact on quadratic log errors") {
    // log v(h) = log v0 + c1 h^2 + c2 h^4 at h = 1, 4/3, 2.
    const auto v = [](double h) { return 2.5 * std::exp(0.3 * h * h - 0.02 * std::pow(h, 4)); };
    CHECK(fd_extrapolate(v(1.0), v(4.0 / 3.0), v(2.0)) == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(fd_extrapolate(-1.0, 1.0, 1.0) == -1.0);
}

TEST_CASE("Green function on R^n") {
    const GreenFunction g3(SolitonSpace::parse("gaussian:3"), 0.25);
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        CHECK(g3.evaluate(Separation{r, 0.0}).value == doctest::Approx(1.0 / (4.0 * pi * r)).epsilon(1e-10));
    }
    // Gamma(n/2 - 1) / (4 pi^{n/2} r^{n-2}).
    const GreenFunction g5(SolitonSpace::parse("gaussian:5"), 0.0);
    const double r = 1.7;
    CHECK(g5.evaluate(Separation{r, 0.0}).value ==
          doctest::Approx(std::tgamma(1.5) / (4.0 * std::pow(pi, 2.5) * std::pow(r, 3))).epsilon(1e-9));
    CHECK_THROWS_AS(g3.evaluate(Separation{0.0, 0.0}), Error);
    CHECK_THROWS_AS(GreenFunction(SolitonSpace::parse("gaussian:2"), 0.25), Error);
}

TEST_CASE("Green function on S^3 against the spectral time integral") {
    // G = sum_l mult_l Z_l(cos theta) / (V lambda_l), lambda_l = l(l+2)/4 + 3/8.
    const auto s3 = SolitonSpace::parse("sphere:3");
    const GreenFunction g(s3, 0.25);
    const double theta = pi / 2.0;
    const double volume = *s3.total_volume();
    // The series alternates at theta = pi/2; average two consecutive partial sums.
    double series = 0.0, previous = 0.0;
    for (int l = 0; l < 200000; ++l) {
        const double d = l;
        const double z = std::sin((d + 1.0) * theta) / ((d + 1.0) * std::sin(theta));
        const double term = (d + 1.0) * (d + 1.0) * z / (volume * (d * (d + 2.0) / 4.0 + 0.375));
        if (term != 0.0) previous = series;
        series += term;
    }
    series = 0.5 * (series + previous);
    const double value = g.evaluate(Separation{theta, 0.0}).value;
    CHECK(value > 0.0);
    CHECK(value == doctest::Approx(series).epsilon(1e-4));
    CHECK_THROWS_AS(GreenFunction(s3, 0.0).evaluate(Separation{1.0, 0.0}), Error);
}

TEST_CASE("volume growth integral") {
    const auto g3 = SolitonSpace::parse("gaussian:3");
    const VolumeGrowth v = volume_growth_integral(g3, g3.origin(), 1e6);
    CHECK_FALSE(v.divergent);
    CHECK(v.value == doctest::Approx(3.0 / (4.0 * pi) * (1.0 - 1e-6)).epsilon(1e-5));
    const auto g2 = SolitonSpace::parse("gaussian:2");
    CHECK(volume_growth_integral(g2, g2.origin(), 1e6).divergent);
    const auto s3 = SolitonSpace::parse("sphere:3");
    CHECK(volume_growth_integral(s3, s3.origin(), 1e6).divergent);
}

}
