#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "solitonlab/entropy.hpp"
#include "solitonlab/verify.hpp"

using namespace solitonlab;
using std::numbers::pi;

namespace {

double scan_m(double gamma, int k_max) {
    double best = INFINITY;
    for (int k = 0; k <= k_max; ++k) {
        best = std::min(best, std::pow(gamma, k + 1) / ((gamma - 1.0) * (k + 2) * std::pow(k + 3.0, 4)));
    }
    return best;
}

GridSpec small_grid() {
    GridSpec g;
    g.pairs = 9;
    g.times = 12;
    g.taus = 8;
    g.log_sobolev_trials = 20;
    g.sobolev_trials = 10;
    g.axiom_samples = 3;
    return g;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("grids are nested under refinement") {
    for (const char* token : {"gaussian:3", "sphere:2", "cylinder:3"}) {
        const auto space = SolitonSpace::parse(token);
        const auto coarse = pair_grid(space, 9);
        const auto fine = pair_grid(space, refined_count(9));
        CHECK(fine.size() == 17);
        std::set<std::string> ids;
        for (const auto& p : fine) ids.insert(p.id);
        for (const auto& p : coarse) CHECK(ids.count(p.id) == 1);
        CHECK(coarse.front().distance == 0.0);
    }
    const auto t = log_grid(5, 1e-2, 1e2);
    CHECK(t.front() == doctest::Approx(1e-2));
    CHECK(t[2] == doctest::Approx(1.0));
    CHECK(t.back() == doctest::Approx(1e2));
    const auto tf = log_grid(9, 1e-2, 1e2);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(tf[2 * i] == doctest::Approx(t[i]).epsilon(1e-14));
}

TEST_CASE("slack finalisation") {
    VerificationReport r;
    r.worst_case_slack = -5e-7;
    r.tolerance = 1e-6;
    finalize_slack(r);
    CHECK(r.passed);
    r.worst_case_slack = -2e-6;
    finalize_slack(r);
    CHECK_FALSE(r.passed);
    r.slack_kind = "ratio";
    r.worst_case_slack = 1.0 + 5e-7;
    finalize_slack(r);
    CHECK(r.passed);
    r.worst_case_slack = 1.01;
    finalize_slack(r);
    CHECK_FALSE(r.passed);
}

TEST_CASE("Grigor'yan constants against a direct scan") {
    const GrigoryanConstants g = grigoryan_constants(2.0, 10.0);
    CHECK(g.m == doctest::Approx(scan_m(2.0, 400)).epsilon(1e-12));
    CHECK(g.argmin_k == 4);
    CHECK(g.D0 == doctest::Approx(2.0 / g.m));
    CHECK(g.delta == doctest::Approx(8.0 / (5.0 * g.D0 - 2.0) / 2.0));
    const GrigoryanConstants half = grigoryan_constants(2.0, 5.0 * g.D0);
    CHECK(half.delta == doctest::Approx(0.5).epsilon(1e-12));
    for (double gamma : {1.5, 3.0, 10.0}) {
        CHECK(grigoryan_constants(gamma, 10.0).m == doctest::Approx(scan_m(gamma, 400)).epsilon(1e-12));
    }
}

TEST_CASE("kernel axioms hold on every catalogue family") {
    for (const char* token : {"gaussian:3", "sphere:2", "sphere:3", "cylinder:3"}) {
        CAPTURE(token);
        const HeatKernel k(SolitonSpace::parse(token), 0.25, KernelMethod::closed_form);
        const VerificationReport r = kernel_axioms(k, 3, 11, 1e-6);
        CHECK(r.passed);
        CHECK(r.flags.value("positivity", false));
    }
}

TEST_CASE("ultracontractivity is sharp on the diagonal of R^n") {
    const auto g3 = SolitonSpace::parse("gaussian:3");
    const HeatKernel k(g3, 0.25, KernelMethod::closed_form);
    const VerificationReport r = ultracontractivity(k, 0.0, small_grid(), 1e-6);
    CHECK(r.passed);
    CHECK(r.extracted["diagonal_max_deviation_from_1"].get<double>() <= 1e-12);
    CHECK(r.rows.size() == 9u * 12u);
    for (const auto& row : r.rows) CHECK(row.lhs <= row.rhs * (1.0 + 1e-12));

    const auto s2 = SolitonSpace::parse("sphere:2");
    const HeatKernel ks(s2, 0.25, KernelMethod::closed_form);
    const VerificationReport rs = ultracontractivity(ks, mu_closed_form(s2), small_grid(), 1e-6);
    CHECK(rs.passed);
    CHECK(rs.extracted["max_ratio"].get<double>() < 1.0);
}

TEST_CASE("ultracontractivity detects a wrong entropy") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const HeatKernel ks(s2, 0.25, KernelMethod::closed_form);
    // Lowering the bound by e^{-1} must produce violations.
    const VerificationReport rs = ultracontractivity(ks, mu_closed_form(s2) + 1.0, small_grid(), 1e-6);
    CHECK_FALSE(rs.passed);
}

TEST_CASE("Gaussian bound: A_emp = 1 on R^n for every c") {
    const HeatKernel k(SolitonSpace::parse("gaussian:3"), 0.25, KernelMethod::closed_form);
    const VerificationReport r = gaussian_bound(k, 0.0, small_grid(), Tolerances{});
    CHECK(r.passed);
    for (const auto& entry : r.extracted["A_emp"]) {
        CHECK(entry["A_emp"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(entry["A_emp_refined"].get<double>() >= entry["A_emp"].get<double>());
    }
}

TEST_CASE("Laplace kernel bound holds on the round sphere") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const HeatKernel laplace(s2, 0.0, KernelMethod::closed_form);
    const VerificationReport r = cr_bound(laplace, mu_closed_form(s2), 1.0, small_grid(), 1e-6);
    CHECK(r.passed);
}

TEST_CASE("Green bound on R^3 recovers 1/(4 pi r)") {
    const GreenFunction g(SolitonSpace::parse("gaussian:3"), 0.25);
    const VerificationReport r = green_bound(g, 0.0, small_grid(), Tolerances{});
    CHECK(r.passed);
    CHECK(r.extracted["B_emp"].get<double>() == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-8));
    CHECK(r.extracted["slope_relative_error"].get<double>() <= 1e-2);
}

TEST_CASE("eigenvalue bound on S^2") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const Spectrum sp = sphere_spectrum(2, 0.25, 40);
    const VerificationReport r = eigenvalue_bound(sp, 2, mu_closed_form(s2), *s2.total_volume(), 400, small_grid(), 1e-6);
    CHECK(r.passed);
    CHECK(r.extracted["lambda_1"].get<double>() == doctest::Approx(0.25));
    // e^mu = 2 / e and V = 8 pi give (4 pi / e)(2 / (8 pi e)) = e^{-2}.
    CHECK(r.extracted["bound_1"].get<double>() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(r.extracted["weyl_within_10_percent"].get<bool>());
}

TEST_CASE("log-Sobolev inequality: sharp Gaussian case and random trials") {
    for (const char* token : {"gaussian:1", "gaussian:3", "sphere:2", "cylinder:3"}) {
        CAPTURE(token);
        const auto space = SolitonSpace::parse(token);
        const VerificationReport r = log_sobolev(space, mu_closed_form(space), small_grid(), 5, 1e-6);
        CHECK(r.passed);
        if (space.kind() == SpaceKind::gaussian) {
            CHECK(r.extracted["sharp_case_max_abs_slack"].get<double>() <= 1e-8);
        }
    }
}

TEST_CASE("Sobolev constant on R^3 approaches the sharp constant") {
    const auto g3 = SolitonSpace::parse("gaussian:3");
    const VerificationReport r = sobolev(g3, 0.25, 0.0, small_grid(), 5, Tolerances{});
    CHECK(r.passed);
    const double sharp = r.extracted["sharp_euclidean_constant"].get<double>();
    // K(n) = 4 / (n (n - 2) |S^n|^{2/n}) with |S^3| = 2 pi^2.
    CHECK(sharp == doctest::Approx(4.0 / (3.0 * std::pow(2.0 * pi * pi, 2.0 / 3.0))).epsilon(1e-12));
    CHECK(r.extracted["C_emp"].get<double>() <= sharp * (1.0 + 1e-6));
}

TEST_CASE("energy monotonicity on Dirichlet data") {
    GridSpec g = small_grid();
    g.energy_trials = 4;
    g.energy_m = 256;
    const VerificationReport r = energy_monotonicity(SolitonSpace::parse("gaussian:1"), 0.25, g, 3, 1e-6);
    CHECK(r.passed);
}

}
