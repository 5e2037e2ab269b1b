#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solitonlab/entropy.hpp"
#include "solitonlab/spaces.hpp"

using namespace solitonlab;
using std::numbers::pi;

namespace {

// e^mu = (4 pi)^{-n/2} int e^{-f} dv, evaluated by hand for each kind.
double mu_oracle(SpaceKind kind, int n) {
    switch (kind) {
        case SpaceKind::gaussian: return 0.0;
        case SpaceKind::sphere: {
            const double r = std::sqrt(2.0 * (n - 1));
            const double volume = 2.0 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1)) * std::pow(r, n);
            return std::log(volume) - 0.5 * n * std::log(4.0 * pi) - 0.5 * n;
        }
        case SpaceKind::cylinder: {
            const double r = std::sqrt(2.0 * (n - 2));
            const double area = 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n) * std::pow(r, n - 1);
            // int e^{-s^2/4} ds = 2 sqrt(pi), f = s^2/4 + (n-1)/2.
            return std::log(area * 2.0 * std::sqrt(pi)) - 0.5 * n * std::log(4.0 * pi) - 0.5 * (n - 1);
        }
    }
    return NAN;
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("closed-form mu against hand-evaluated partition integrals") {
    const double ln2m1 = std::log(2.0) - 1.0;
    CHECK(mu_closed_form(SolitonSpace::parse("sphere:2")) == doctest::Approx(ln2m1).epsilon(1e-14));
    CHECK(mu_closed_form(SolitonSpace::parse("cylinder:3")) == doctest::Approx(ln2m1).epsilon(1e-14));
    CHECK(mu_closed_form(SolitonSpace::parse("sphere:3")) == doctest::Approx(-0.234488).epsilon(1e-5));
    CHECK(std::exp(mu_closed_form(SolitonSpace::parse("sphere:3"))) ==
          doctest::Approx(2.0 * std::sqrt(pi) * std::exp(-1.5)).epsilon(1e-14));
    for (int n = 1; n <= 5; ++n) CHECK(mu_closed_form(SolitonSpace::make(SpaceKind::gaussian, n)) == 0.0);
    for (int n = 2; n <= 5; ++n) {
        CHECK(mu_closed_form(SolitonSpace::make(SpaceKind::sphere, n)) ==
              doctest::Approx(mu_oracle(SpaceKind::sphere, n)).epsilon(1e-13));
    }
    for (int n = 3; n <= 5; ++n) {
        CHECK(mu_closed_form(SolitonSpace::make(SpaceKind::cylinder, n)) ==
              doctest::Approx(mu_oracle(SpaceKind::cylinder, n)).epsilon(1e-13));
    }
}

TEST_CASE("quadrature agrees with the closed form") {
    for (const char* token : {"gaussian:1", "gaussian:2", "gaussian:3", "sphere:2", "sphere:4", "cylinder:3",
                              "cylinder:4"}) {
        CAPTURE(token);
        const EntropyReport r = mu(SolitonSpace::parse(token));
        CHECK(std::abs(r.quadrature_mu - r.mu) <= 1e-8);
        CHECK(std::abs(r.normalization_check) <= 1e-8);
    }
}

TEST_CASE("the potential minimises W") {
    for (const char* token : {"gaussian:1", "gaussian:3", "sphere:2", "sphere:3", "cylinder:3"}) {
        CAPTURE(token);
        CHECK(minimizer_check(SolitonSpace::parse(token)) <= 1e-8);
    }
    const auto g1 = SolitonSpace::parse("gaussian:1");
    CHECK(w_entropy(g1, potential_log_density(g1), 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    const auto s2 = SolitonSpace::parse("sphere:2");
    CHECK(w_entropy(s2, potential_log_density(s2), 1.0) == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("mu is an infimum: perturbed densities lie above it") {
    std::mt19937_64 rng(5);
    for (const char* token : {"gaussian:2", "sphere:2", "cylinder:3"}) {
        const auto space = SolitonSpace::parse(token);
        const double m = mu_closed_form(space);
        for (int i = 0; i < 10; ++i) {
            CAPTURE(token);
            CHECK(w_entropy(space, random_log_density(space, rng), 1.0) >= m - 1e-6);
        }
    }
}

TEST_CASE("unnormalised densities are rejected") {
    const auto g2 = SolitonSpace::parse("gaussian:2");
    LogDensityTrial phi = potential_log_density(g2);
    phi.shift += 0.1;
    CHECK_THROWS(w_entropy(g2, phi, 1.0));
}

}
