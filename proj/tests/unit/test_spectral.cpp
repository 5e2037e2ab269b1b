#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solitonlab/error.hpp"
#include "solitonlab/spectral.hpp"

using namespace solitonlab;
using std::numbers::pi;

TEST_SUITE("spectral") {

TEST_CASE("harmonic dimensions") {
    for (int l = 0; l < 20; ++l) {
        CHECK(spherical_harmonic_dimension(2, l) == 2 * l + 1);
        CHECK(spherical_harmonic_dimension(3, l) == (l + 1) * (l + 1));
        CHECK(spherical_harmonic_dimension(4, l) == (l + 1) * (l + 2) * (2 * l + 3) / 6);
    }
}

TEST_CASE("zonal harmonics: Legendre on S^2, Chebyshev U on S^3") {
    for (double x : {-0.9, -0.3, 0.0, 0.45, 0.99}) {
        const auto z2 = zonal_harmonics(2, 30, x);
        const auto z3 = zonal_harmonics(3, 30, x);
        const double theta = std::acos(x);
        for (int l = 0; l <= 30; ++l) {
            CHECK(z2[l] == doctest::Approx(std::legendre(l, x)).epsilon(1e-12));
            const double u = std::sin((l + 1) * theta) / ((l + 1) * std::sin(theta));
            CHECK(z3[l] == doctest::Approx(u).epsilon(1e-11));
        }
    }
    const auto at_pole = zonal_harmonics(5, 10, 1.0);
    for (double z : at_pole) CHECK(z == doctest::Approx(1.0));
}

TEST_CASE("sphere spectra") {
    const Spectrum s2 = sphere_spectrum(2, 0.25, 10);
    CHECK(s2.eigenvalue(1) == doctest::Approx(0.25));
    for (std::size_t k = 2; k <= 4; ++k) CHECK(s2.eigenvalue(k) == doctest::Approx(1.25));
    for (std::size_t k = 5; k <= 9; ++k) CHECK(s2.eigenvalue(k) == doctest::Approx(3.25));
    CHECK(s2.eigenvalue(10) == doctest::Approx(6.25));
    CHECK(sphere_spectrum(2, 0.0, 3).eigenvalue(1) == 0.0);

    const Spectrum s3 = sphere_spectrum(3, 0.25, 4);
    CHECK(s3.levels()[1].value == doctest::Approx(1.125));
    CHECK(s3.levels()[1].multiplicity == 4);
    CHECK(s3.size() == 1 + 4 + 9 + 16 + 25);
    CHECK(s3.counting_function(1.125) == 5);
    CHECK(s3.counting_function(1.0) == 1);
}

TEST_CASE("partition function: direct summation oracle") {
    const Spectrum s2 = sphere_spectrum(2, 0.25, 60);
    double oracle = 0.0;
    for (int l = 0; l <= 50; ++l) oracle += (2 * l + 1) * std::exp(-(l * (l + 1) / 2.0 + 0.25));
    const PartitionValue z = partition_function(s2, 1.0);
    CHECK(z.total() == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(z.total() == doctest::Approx(1.8460).epsilon(1e-4));

    // A constant shift c multiplies the partition function by e^{-ct}.
    const Spectrum s2a = sphere_spectrum(2, 0.75, 60);  // shift 0.5 a R = 0.5
    for (double t : {0.3, 1.0, 4.0}) {
        CHECK(partition_function(s2a, t).total() ==
              doctest::Approx(std::exp(-0.5 * t) * partition_function(s2, t).total()).epsilon(1e-11));
    }
    // Ground-state dominance.
    CHECK(partition_function(s2, 40.0).total() == doctest::Approx(std::exp(-0.25 * 40.0)).epsilon(1e-9));
}

TEST_CASE("radial operator is symmetric in the volume-weighted product") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int n : {1, 2, 3, 5}) {
        const auto op = discretize_radial(SolitonSpace::make(SpaceKind::gaussian, n), 5.0, 300, 0.0);
        std::vector<double> u(op.m), v(op.m);
        for (int i = 0; i < op.m; ++i) {
            u[i] = unit(rng);
            v[i] = unit(rng);
        }
        const double lhs = op.weighted_inner(op.apply(u), v);
        const double rhs = op.weighted_inner(u, op.apply(v));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(op.weighted_inner(op.apply(u), u) > 0.0);
    }
}

TEST_CASE("Dirichlet ball spectra") {
    // Even functions on (-pi, pi): ground state (1/2)^2.
    const auto op1 = discretize_radial(SolitonSpace::make(SpaceKind::gaussian, 1), pi, 2048, 0.0);
    CHECK(eigen_solve(op1, 1).eigenvalue(1) == doctest::Approx(0.25).epsilon(4e-4));
    // Ball in R^3: u = sin(k r)/r with k = j pi / R.
    const auto op3 = discretize_radial(SolitonSpace::make(SpaceKind::gaussian, 3), pi, 2048, 0.0);
    const Spectrum s3 = eigen_solve(op3, 5);
    for (std::size_t j = 1; j <= 5; ++j) {
        CHECK(std::abs(s3.eigenvalue(j) - double(j * j)) <= 1e-3 * double(j * j));
    }
    // Constant shift moves the spectrum rigidly.
    const auto shifted = discretize_radial(SolitonSpace::make(SpaceKind::gaussian, 3), pi, 2048, 0.0, 0.7);
    const Spectrum s3b = eigen_solve(shifted, 5);
    for (std::size_t j = 1; j <= 5; ++j) CHECK(s3b.eigenvalue(j) == doctest::Approx(s3.eigenvalue(j) + 0.7));
}

TEST_CASE("tridiagonal -u'' on the unit interval") {
    const int m = 512;
    const double h = 1.0 / (m + 1);
    SymTridiagonal t;
    t.diag.assign(m, 2.0 / (h * h));
    t.off.assign(m - 1, -1.0 / (h * h));
    const Spectrum s = eigen_solve(t, 5);
    for (std::size_t j = 1; j <= 5; ++j) {
        const double exact = j * j * pi * pi;
        CHECK(std::abs(s.eigenvalue(j) - exact) <= 1e-4 * exact);
    }
    SymTridiagonal small;
    small.diag.assign(16, 2.0);
    small.off.assign(15, -1.0);
    const Spectrum all = eigen_solve(small, 16);
    CHECK(all.size() == 16);
    for (std::size_t j = 1; j <= 16; ++j) {
        const double exact = 2.0 - 2.0 * std::cos(j * pi / 17.0);
        CHECK(all.eigenvalue(j) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("eigenvectors are weighted-orthonormal Dirichlet modes") {
    const auto op = discretize_radial(SolitonSpace::make(SpaceKind::gaussian, 3), 4.0, 400, 0.0);
    const EigenPairs pairs = eigen_pairs(op, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(op.weighted_inner(pairs.vectors[i], pairs.vectors[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
        }
        const auto av = op.apply(pairs.vectors[i]);
        double residual = 0.0;
        for (int k = 0; k < op.m; ++k) residual = std::max(residual, std::abs(av[k] - pairs.values[i] * pairs.vectors[i][k]));
        CHECK(residual <= 1e-8 * pairs.values[i]);
    }
}

TEST_CASE("degenerate requests") {
    CHECK_THROWS_AS(discretize_radial(SolitonSpace::parse("sphere:2"), 2.0, 100, 0.0), Error);
    CHECK_THROWS_AS(discretize_radial(SolitonSpace::parse("gaussian:2"), 2.0, 8, 0.0), Error);
    CHECK_THROWS_AS(sphere_spectrum(2, 0.25, 5).eigenvalue(0), Error);
}

}
