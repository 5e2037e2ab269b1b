#pragma once

// Closed-form catalogue of gradient shrinking Ricci solitons
//
//   Ric + Hess f = g / 2,   R + |grad f|^2 = f,   (4 pi)^{-n/2} int e^{-f} dv = e^mu.
//
// Three rotationally symmetric shrinkers have closed forms: the Gaussian
// soliton (flat R^n, f = |x|^2/4), the round sphere S^n of radius sqrt(2(n-1)),
// and the cylinder S^{n-1} x R with sphere factor of radius sqrt(2(n-2)).
// All three are homogeneous enough that every quantity we integrate reduces to
// a one-dimensional "profile" coordinate rho:
//   gaussian: rho = |x|, sphere: rho = geodesic distance from the pole,
//   cylinder: rho = s, the line coordinate.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace solitonlab {

enum class SpaceKind { gaussian, sphere, cylinder };

std::string_view to_string(SpaceKind kind);
SpaceKind parse_space_kind(std::string_view name);

/// Kind-tagged point. `coords` holds R^n coordinates (gaussian), an ambient
/// unit vector in R^{n+1} (sphere) or a unit vector in R^n for the S^{n-1}
/// factor (cylinder); `line` is the cylinder's s coordinate.
struct Point {
    SpaceKind kind = SpaceKind::gaussian;
    std::vector<double> coords;
    double line = 0.0;
};

/// Angular / linear separation of two points; the catalogue kernels depend on
/// nothing else. gaussian: {distance, 0}; sphere: {angle, 0};
/// cylinder: {angle on the sphere factor, |s1 - s2|}.
struct Separation {
    double primary = 0.0;
    double line = 0.0;
};

/// Volume of the unit k-sphere S^k in R^{k+1}.
double unit_sphere_area(int k);
/// Volume of the unit ball in R^k.
double unit_ball_volume(int k);

class SolitonSpace {
public:
    static SolitonSpace make(SpaceKind kind, int n);
    /// Parses the CLI token form `gaussian:N`, `sphere:N`, `cylinder:N`.
    static SolitonSpace parse(std::string_view token);

    SpaceKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    /// Radius of the sphere (sphere) or of the S^{n-1} factor (cylinder).
    std::optional<double> sphere_radius() const noexcept;
    std::string descriptor() const;

    double potential(const Point& p) const;
    double scalar_curvature(const Point& p) const;
    double grad_potential_sq(const Point& p) const;
    double laplacian_potential(const Point& p) const;

    /// sup R over the space; 0, n/2 and (n-1)/2 respectively.
    double sup_scalar_curvature() const noexcept;
    /// True when R is constant on the space (sphere and cylinder; gaussian R = 0).
    bool constant_curvature() const noexcept { return true; }
    bool compact() const noexcept { return kind_ == SpaceKind::sphere; }
    /// Total volume; empty for the non-compact kinds.
    std::optional<double> total_volume() const;

    double distance(const Point& x, const Point& y) const;
    Separation separation(const Point& x, const Point& y) const;
    /// Geodesic distance realised by a separation.
    double separation_distance(const Separation& s) const;

    /// Volume of the geodesic ball of radius r (independent of the center).
    double ball_volume(double r) const;

    // Profile-coordinate reduction.
    std::pair<double, double> profile_range() const;
    /// dv = profile_weight(rho) d rho for functions of rho alone.
    double profile_weight(double rho) const;
    /// f and df/drho as functions of rho.
    double profile_potential(double rho) const;
    double profile_potential_derivative(double rho) const;

    // Point construction.
    Point origin() const;
    /// Point at profile coordinate rho from origin() along a fixed direction.
    Point point_at(double rho) const;
    /// Point whose separation from origin() is exactly `s`.
    Point point_at_separation(const Separation& s) const;
    Point random_point(std::mt19937_64& rng, double spread = 2.0) const;
    /// Builds a point from raw coordinates; sphere/cylinder directions are
    /// normalised. Cylinder expects n direction components followed by s.
    Point point_from_coords(const std::vector<double>& values) const;

    void validate(const Point& p) const;

private:
    SolitonSpace(SpaceKind kind, int n);

    SpaceKind kind_;
    int n_;
    double radius_ = 0.0;
};

struct IdentityReport {
    double max_trace_defect = 0.0;      // max |R + |grad f|^2 - f|
    double max_laplacian_defect = 0.0;  // max |R + Lap f - n/2|
    int samples = 0;
};

IdentityReport check_soliton_identities(const SolitonSpace& space, int sample_count,
                                        std::uint64_t seed);

}  // namespace solitonlab
