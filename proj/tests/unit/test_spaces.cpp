#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solitonlab/error.hpp"
#include "solitonlab/spaces.hpp"

using namespace solitonlab;
using std::numbers::pi;

TEST_SUITE("spaces") {

TEST_CASE("catalogue parameters") {
    const auto g = SolitonSpace::parse("gaussian:3");
    CHECK(g.kind() == SpaceKind::gaussian);
    CHECK(g.sup_scalar_curvature() == 0.0);
    CHECK_FALSE(g.total_volume().has_value());
    CHECK(g.potential(g.point_from_coords({1.0, 2.0, 2.0})) == doctest::Approx(9.0 / 4.0));

    // Ric = (n-1)/r^2 g = g/2 gives r^2 = 2(n-1); V = 4 pi r^2 on S^2.
    const auto s2 = SolitonSpace::parse("sphere:2");
    CHECK(*s2.sphere_radius() == doctest::Approx(std::sqrt(2.0)));
    CHECK(s2.sup_scalar_curvature() == 1.0);
    CHECK(s2.potential(s2.origin()) == doctest::Approx(1.0));
    CHECK(*s2.total_volume() == doctest::Approx(8.0 * pi).epsilon(1e-14));

    const auto c4 = SolitonSpace::parse("cylinder:4");
    CHECK(*c4.sphere_radius() == doctest::Approx(2.0));
    CHECK(c4.sup_scalar_curvature() == doctest::Approx(1.5));
    CHECK(c4.descriptor() == "cylinder:4");
}

TEST_CASE("out of range dimensions") {
    CHECK_THROWS_AS(SolitonSpace::parse("cylinder:2"), Error);
    CHECK_THROWS_AS(SolitonSpace::parse("sphere:1"), Error);
    CHECK_THROWS_AS(SolitonSpace::parse("gaussian:0"), Error);
    CHECK_THROWS_AS(SolitonSpace::parse("torus:2"), Error);
    CHECK_THROWS_AS(SolitonSpace::parse("sphere"), Error);
    try {
        SolitonSpace::parse("cylinder:2");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::dimension_out_of_range);
    }
}

TEST_CASE("unit sphere and ball volumes") {
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * pi));
    CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * pi));
    CHECK(unit_sphere_area(3) == doctest::Approx(2.0 * pi * pi));
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
    CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
}

TEST_CASE("distances") {
    const auto g = SolitonSpace::parse("gaussian:3");
    CHECK(g.distance(g.point_from_coords({0, 0, 0}), g.point_from_coords({3, 4, 0})) == doctest::Approx(5.0));

    const auto s2 = SolitonSpace::parse("sphere:2");
    const Point north = s2.point_from_coords({0, 0, 1});
    const Point south = s2.point_from_coords({0, 0, -1});
    CHECK(s2.distance(north, south) == doctest::Approx(pi * std::sqrt(2.0)));
    CHECK(s2.distance(north, north) == 0.0);

    // Cylinder: Pythagoras over the S^2 factor of radius sqrt 2 and the line.
    const auto c3 = SolitonSpace::parse("cylinder:3");
    const Point p = c3.point_from_coords({1, 0, 0, 0.0});
    const Point q = c3.point_from_coords({0, 1, 0, 2.0});
    const double arc = std::sqrt(2.0) * pi / 2.0;
    CHECK(c3.distance(p, q) == doctest::Approx(std::sqrt(arc * arc + 4.0)));
}

TEST_CASE("distance is a metric on random samples") {
    std::mt19937_64 rng(11);
    for (const char* token : {"gaussian:2", "sphere:3", "cylinder:3", "cylinder:5"}) {
        const auto s = SolitonSpace::parse(token);
        for (int i = 0; i < 50; ++i) {
            const Point x = s.random_point(rng), y = s.random_point(rng), z = s.random_point(rng);
            const double xy = s.distance(x, y);
            CHECK(xy >= 0.0);
            CHECK(xy == doctest::Approx(s.distance(y, x)));
            CHECK(s.distance(x, x) == doctest::Approx(0.0));
            CHECK(xy <= s.distance(x, z) + s.distance(z, y) + 1e-12);
            CHECK(s.separation_distance(s.separation(x, y)) == doctest::Approx(xy));
        }
    }
}

TEST_CASE("point_at_separation realises the separation") {
    const auto c3 = SolitonSpace::parse("cylinder:3");
    const Separation sep{1.1, 0.7};
    const Separation back = c3.separation(c3.origin(), c3.point_at_separation(sep));
    CHECK(back.primary == doctest::Approx(1.1));
    CHECK(std::abs(back.line) == doctest::Approx(0.7));
}

TEST_CASE("soliton identities hold at sample points") {
    for (const char* token : {"gaussian:1", "gaussian:3", "gaussian:5", "sphere:2", "sphere:5", "cylinder:3",
                              "cylinder:5"}) {
        CAPTURE(token);
        const IdentityReport r = check_soliton_identities(SolitonSpace::parse(token), 100, 3);
        CHECK(r.max_trace_defect <= 1e-12);
        CHECK(r.max_laplacian_defect <= 1e-12);
    }
}

TEST_CASE("ball volumes") {
    const auto g3 = SolitonSpace::parse("gaussian:3");
    CHECK(g3.ball_volume(2.0) == doctest::Approx(4.0 * pi / 3.0 * 8.0));
    // A ball of radius pi r covers the sphere.
    const auto s3 = SolitonSpace::parse("sphere:3");
    CHECK(s3.ball_volume(pi * 2.0) == doctest::Approx(*s3.total_volume()));
    // Small balls are Euclidean to leading order.
    CHECK(s3.ball_volume(1e-3) == doctest::Approx(4.0 * pi / 3.0 * 1e-9).epsilon(1e-6));
}

TEST_CASE("profile weight integrates to the volume") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const auto [lo, hi] = s2.profile_range();
    double sum = 0.0;
    const int steps = 20000;
    for (int i = 0; i < steps; ++i) {
        const double rho = lo + (i + 0.5) * (hi - lo) / steps;
        sum += s2.profile_weight(rho) * (hi - lo) / steps;
    }
    CHECK(sum == doctest::Approx(8.0 * pi).epsilon(1e-7));
}

TEST_CASE("kind mismatch and malformed points") {
    const auto s2 = SolitonSpace::parse("sphere:2");
    const auto g2 = SolitonSpace::parse("gaussian:2");
    CHECK_THROWS_AS(s2.distance(s2.origin(), g2.origin()), Error);
    CHECK_THROWS_AS(g2.point_from_coords({1.0, 2.0, 3.0}), Error);
}

}
