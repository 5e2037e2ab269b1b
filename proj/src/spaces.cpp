#include "solitonlab/spaces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/quadrature.hpp"

namespace solitonlab {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::dimension_out_of_range: return "dimension-out-of-range";
        case ErrorCode::kind_mismatch: return "kind-mismatch";
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::convergence_failure: return "convergence-failure";
        case ErrorCode::under_resolved: return "under-resolved";
        case ErrorCode::divergence: return "divergence";
        case ErrorCode::normalization_failure: return "normalization-failure";
        case ErrorCode::hypothesis_failure: return "hypothesis-failure";
        case ErrorCode::config_error: return "config-error";
        case ErrorCode::io_error: return "io-error";
    }
    return "error";
}

std::string_view to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::gaussian: return "gaussian";
        case SpaceKind::sphere: return "sphere";
        case SpaceKind::cylinder: return "cylinder";
    }
    return "?";
}

SpaceKind parse_space_kind(std::string_view name) {
    if (name == "gaussian") return SpaceKind::gaussian;
    if (name == "sphere") return SpaceKind::sphere;
    if (name == "cylinder") return SpaceKind::cylinder;
    throw Error(ErrorCode::invalid_argument, "unknown space kind '" + std::string(name) + "'");
}

double unit_sphere_area(int k) {
    const double half = 0.5 * (k + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double unit_ball_volume(int k) {
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Angle between unit vectors; the clamp keeps acos defined at antipodes.
double angle_between(const std::vector<double>& a, const std::vector<double>& b) {
    return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

// Volume of a geodesic cap of radius rho on the k-sphere of radius r.
double cap_volume(int k, double r, double rho) {
    const double theta = std::min(rho / r, std::numbers::pi);
    if (theta <= 0.0) return 0.0;
    const double base = unit_sphere_area(k - 1) * std::pow(r, k);
    if (k == 1) return base * theta;
    if (k == 2) return base * (1.0 - std::cos(theta));
    const auto integrand = [k](double u) { return std::pow(std::sin(u), k - 1); };
    return base * quad::integrate(integrand, 0.0, theta, 1e-15, 1e-13).value;
}

}  // namespace

SolitonSpace::SolitonSpace(SpaceKind kind, int n) : kind_(kind), n_(n) {
    switch (kind) {
        case SpaceKind::gaussian:
            if (n < 1) throw Error(ErrorCode::dimension_out_of_range, "gaussian requires n >= 1");
            break;
        case SpaceKind::sphere:
            if (n < 2) throw Error(ErrorCode::dimension_out_of_range, "sphere requires n >= 2");
            radius_ = std::sqrt(2.0 * (n - 1));
            break;
        case SpaceKind::cylinder:
            if (n < 3) throw Error(ErrorCode::dimension_out_of_range, "cylinder requires n >= 3");
            radius_ = std::sqrt(2.0 * (n - 2));
            break;
    }
}

SolitonSpace SolitonSpace::make(SpaceKind kind, int n) { return SolitonSpace(kind, n); }

SolitonSpace SolitonSpace::parse(std::string_view token) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::invalid_argument,
                    "space token must look like kind:N, got '" + std::string(token) + "'");
    }
    const SpaceKind kind = parse_space_kind(token.substr(0, colon));
    const std::string_view digits = token.substr(colon + 1);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw Error(ErrorCode::invalid_argument, "bad dimension in '" + std::string(token) + "'");
    }
    return make(kind, n);
}

std::optional<double> SolitonSpace::sphere_radius() const noexcept {
    if (kind_ == SpaceKind::gaussian) return std::nullopt;
    return radius_;
}

std::string SolitonSpace::descriptor() const {
    return std::string(to_string(kind_)) + ":" + std::to_string(n_);
}

void SolitonSpace::validate(const Point& p) const {
    if (p.kind != kind_) {
        throw Error(ErrorCode::kind_mismatch, "point of kind " + std::string(to_string(p.kind)) +
                                                  " used on " + descriptor());
    }
    std::size_t expected = static_cast<std::size_t>(n_);
    if (kind_ == SpaceKind::sphere) expected = static_cast<std::size_t>(n_ + 1);
    if (p.coords.size() != expected) {
        throw Error(ErrorCode::invalid_argument,
                    "point has " + std::to_string(p.coords.size()) + " coordinates, expected " +
                        std::to_string(expected));
    }
    if (kind_ != SpaceKind::gaussian && std::abs(norm(p.coords) - 1.0) > 1e-12) {
        throw Error(ErrorCode::invalid_argument, "direction is not a unit vector");
    }
}

double SolitonSpace::potential(const Point& p) const {
    validate(p);
    switch (kind_) {
        case SpaceKind::gaussian: return 0.25 * dot(p.coords, p.coords);
        case SpaceKind::sphere: return 0.5 * n_;
        case SpaceKind::cylinder: return 0.25 * p.line * p.line + 0.5 * (n_ - 1);
    }
    return 0.0;
}

double SolitonSpace::scalar_curvature(const Point& p) const {
    validate(p);
    return sup_scalar_curvature();
}

double SolitonSpace::grad_potential_sq(const Point& p) const {
    validate(p);
    switch (kind_) {
        case SpaceKind::gaussian: return 0.25 * dot(p.coords, p.coords);
        case SpaceKind::sphere: return 0.0;
        case SpaceKind::cylinder: return 0.25 * p.line * p.line;
    }
    return 0.0;
}

double SolitonSpace::laplacian_potential(const Point& p) const {
    validate(p);
    switch (kind_) {
        case SpaceKind::gaussian: return 0.5 * n_;
        case SpaceKind::sphere: return 0.0;
        case SpaceKind::cylinder: return 0.5;
    }
    return 0.0;
}

double SolitonSpace::sup_scalar_curvature() const noexcept {
    switch (kind_) {
        case SpaceKind::gaussian: return 0.0;
        case SpaceKind::sphere: return 0.5 * n_;
        case SpaceKind::cylinder: return 0.5 * (n_ - 1);
    }
    return 0.0;
}

std::optional<double> SolitonSpace::total_volume() const {
    if (kind_ != SpaceKind::sphere) return std::nullopt;
    return unit_sphere_area(n_) * std::pow(radius_, n_);
}

Separation SolitonSpace::separation(const Point& x, const Point& y) const {
    validate(x);
    validate(y);
    switch (kind_) {
        case SpaceKind::gaussian: {
            double s = 0.0;
            for (int i = 0; i < n_; ++i) {
                const double d = x.coords[i] - y.coords[i];
                s += d * d;
            }
            return {std::sqrt(s), 0.0};
        }
        case SpaceKind::sphere: return {angle_between(x.coords, y.coords), 0.0};
        case SpaceKind::cylinder:
            return {angle_between(x.coords, y.coords), std::abs(x.line - y.line)};
    }
    return {};
}

double SolitonSpace::separation_distance(const Separation& s) const {
    switch (kind_) {
        case SpaceKind::gaussian: return s.primary;
        case SpaceKind::sphere: return radius_ * s.primary;
        case SpaceKind::cylinder: return std::hypot(radius_ * s.primary, s.line);
    }
    return 0.0;
}

double SolitonSpace::distance(const Point& x, const Point& y) const {
    return separation_distance(separation(x, y));
}

double SolitonSpace::ball_volume(double r) const {
    if (r <= 0.0) return 0.0;
    switch (kind_) {
        case SpaceKind::gaussian: return unit_ball_volume(n_) * std::pow(r, n_);
        case SpaceKind::sphere: return cap_volume(n_, radius_, r);
        case SpaceKind::cylinder: {
            // Slices at fixed s are caps of geodesic radius sqrt(r^2 - s^2).
            const int k = n_ - 1;
            const double rc = radius_;
            const auto slice = [k, rc, r](double s) {
                return cap_volume(k, rc, std::sqrt(std::max(0.0, r * r - s * s)));
            };
            // The cap saturates once sqrt(r^2 - s^2) >= pi rc; split there.
            std::vector<double> breaks;
            const double sat = r * r - std::numbers::pi * std::numbers::pi * rc * rc;
            if (sat > 0.0) breaks.push_back(std::sqrt(sat));
            return 2.0 * quad::integrate_pieces(slice, 0.0, r, breaks, 1e-13, 1e-12).value;
        }
    }
    return 0.0;
}

std::pair<double, double> SolitonSpace::profile_range() const {
    switch (kind_) {
        case SpaceKind::gaussian: return {0.0, INFINITY};
        case SpaceKind::sphere: return {0.0, std::numbers::pi * radius_};
        case SpaceKind::cylinder: return {-INFINITY, INFINITY};
    }
    return {0.0, 0.0};
}

double SolitonSpace::profile_weight(double rho) const {
    switch (kind_) {
        case SpaceKind::gaussian:
            return unit_sphere_area(n_ - 1) * std::pow(std::abs(rho), n_ - 1);
        case SpaceKind::sphere:
            return unit_sphere_area(n_ - 1) * std::pow(radius_ * std::sin(rho / radius_), n_ - 1);
        case SpaceKind::cylinder: return unit_sphere_area(n_ - 1) * std::pow(radius_, n_ - 1);
    }
    return 0.0;
}

double SolitonSpace::profile_potential(double rho) const {
    switch (kind_) {
        case SpaceKind::gaussian: return 0.25 * rho * rho;
        case SpaceKind::sphere: return 0.5 * n_;
        case SpaceKind::cylinder: return 0.25 * rho * rho + 0.5 * (n_ - 1);
    }
    return 0.0;
}

double SolitonSpace::profile_potential_derivative(double rho) const {
    return kind_ == SpaceKind::sphere ? 0.0 : 0.5 * rho;
}

Point SolitonSpace::origin() const {
    Point p;
    p.kind = kind_;
    switch (kind_) {
        case SpaceKind::gaussian: p.coords.assign(n_, 0.0); break;
        case SpaceKind::sphere:
            p.coords.assign(n_ + 1, 0.0);
            p.coords[0] = 1.0;
            break;
        case SpaceKind::cylinder:
            p.coords.assign(n_, 0.0);
            p.coords[0] = 1.0;
            break;
    }
    return p;
}

Point SolitonSpace::point_at(double rho) const {
    Point p = origin();
    switch (kind_) {
        case SpaceKind::gaussian: p.coords[0] = rho; break;
        case SpaceKind::sphere:
            p.coords[0] = std::cos(rho / radius_);
            p.coords[1] = std::sin(rho / radius_);
            break;
        case SpaceKind::cylinder: p.line = rho; break;
    }
    return p;
}

Point SolitonSpace::point_at_separation(const Separation& s) const {
    Point p = origin();
    switch (kind_) {
        case SpaceKind::gaussian: p.coords[0] = s.primary; break;
        case SpaceKind::sphere:
        case SpaceKind::cylinder:
            p.coords[0] = std::cos(s.primary);
            p.coords[1] = std::sin(s.primary);
            p.line = s.line;
            break;
    }
    return p;
}

Point SolitonSpace::random_point(std::mt19937_64& rng, double spread) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Point p;
    p.kind = kind_;
    const int dim = kind_ == SpaceKind::sphere ? n_ + 1 : n_;
    p.coords.resize(dim);
    for (double& c : p.coords) c = normal(rng);
    if (kind_ == SpaceKind::gaussian) {
        for (double& c : p.coords) c *= spread;
        return p;
    }
    double len = norm(p.coords);
    while (len < 1e-8) {
        for (double& c : p.coords) c = normal(rng);
        len = norm(p.coords);
    }
    for (double& c : p.coords) c /= len;
    if (kind_ == SpaceKind::cylinder) p.line = spread * normal(rng);
    return p;
}

Point SolitonSpace::point_from_coords(const std::vector<double>& values) const {
    Point p;
    p.kind = kind_;
    switch (kind_) {
        case SpaceKind::gaussian: p.coords = values; break;
        case SpaceKind::sphere: p.coords = values; break;
        case SpaceKind::cylinder:
            if (values.size() != static_cast<std::size_t>(n_ + 1)) {
                throw Error(ErrorCode::invalid_argument,
                            "cylinder point needs " + std::to_string(n_) +
                                " direction components followed by s");
            }
            p.coords.assign(values.begin(), values.end() - 1);
            p.line = values.back();
            break;
    }
    if (kind_ != SpaceKind::gaussian) {
        const double len = norm(p.coords);
        if (len == 0.0) throw Error(ErrorCode::invalid_argument, "zero direction vector");
        for (double& c : p.coords) c /= len;
    }
    validate(p);
    return p;
}

IdentityReport check_soliton_identities(const SolitonSpace& space, int sample_count,
                                        std::uint64_t seed) {
    if (sample_count < 1) throw Error(ErrorCode::invalid_argument, "sample_count must be >= 1");
    std::mt19937_64 rng(seed);
    IdentityReport report;
    report.samples = sample_count;
    const double half_n = 0.5 * space.dimension();
    for (int i = 0; i < sample_count; ++i) {
        const Point p = space.random_point(rng, 3.0);
        const double f = space.potential(p);
        const double r = space.scalar_curvature(p);
        report.max_trace_defect =
            std::max(report.max_trace_defect, std::abs(r + space.grad_potential_sq(p) - f));
        report.max_laplacian_defect =
            std::max(report.max_laplacian_defect, std::abs(r + space.laplacian_potential(p) - half_n));
    }
    return report;
}

}  // namespace solitonlab
