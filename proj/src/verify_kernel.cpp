#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "solitonlab/error.hpp"
#include "solitonlab/quadrature.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

VerificationReport make_report(std::string id, const SolitonSpace& space, double a) {
    VerificationReport r;
    r.theorem_id = std::move(id);
    r.space = space.descriptor();
    r.a = a;
    return r;
}

std::string c_label(const std::string& id, double c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s[c=%g]", id.c_str(), c);
    return buf;
}

// sin^{k} with the k = 0 convention sin^0 = 1 at the poles.
double sin_power(double x, int k) { return k == 0 ? 1.0 : std::pow(std::sin(x), k); }

// ---------------------------------------------------------------- integrals

// int H(x, z, t) dv(z) over the whole space.
double kernel_mass(const HeatKernel& k, double t) {
    const SolitonSpace& space = k.space();
    const int n = space.dimension();
    const double w = std::sqrt(t);
    switch (space.kind()) {
        case SpaceKind::gaussian: {
            const auto f = [&](double rho) {
                return k.evaluate(Separation{rho, 0.0}, t).value * space.profile_weight(rho);
            };
            const double breaks[] = {w, 4.0 * w, 16.0 * w};
            return quad::integrate_pieces(f, 0.0, 40.0 * w, breaks, 1e-300, 1e-12).value;
        }
        case SpaceKind::sphere: {
            const double r = *space.sphere_radius();
            const auto f = [&](double rho) {
                return k.evaluate(Separation{rho / r, 0.0}, t).value * space.profile_weight(rho);
            };
            const double breaks[] = {w, 4.0 * w, 16.0 * w};
            return quad::integrate_pieces(f, 0.0, kPi * r, breaks, 1e-300, 1e-12).value;
        }
        case SpaceKind::cylinder: {
            const double r = *space.sphere_radius();
            const double area = unit_sphere_area(n - 2);
            const auto inner = [&](double s) {
                const auto g = [&](double theta) {
                    return k.evaluate(Separation{theta, s}, t).value * area *
                           std::pow(r * std::sin(theta), n - 2) * r;
                };
                const double breaks[] = {w / r, 4.0 * w / r, 16.0 * w / r};
                return quad::integrate_pieces(g, 0.0, kPi, breaks, 1e-300, 1e-11).value;
            };
            const double breaks[] = {w, 4.0 * w, 16.0 * w};
            return 2.0 * quad::integrate_pieces(inner, 0.0, 40.0 * w, breaks, 1e-300, 1e-10).value;
        }
    }
    return kNaN;
}

// int H(x, z, t) H(z, y, s) dv(z) on a round sphere, in geodesic polar
// coordinates (alpha, psi) about x with psi measured from the direction of y.
double sphere_semigroup(const HeatKernel& k, int dim, double radius, double theta, double t,
                        double s) {
    const double area = unit_sphere_area(dim - 2);
    const double peak = theta * t / (t + s);
    const double width = std::sqrt(t * s / (t + s)) / radius;
    const auto outer = [&](double alpha) {
        const double ca = std::cos(alpha);
        const double sa = std::sin(alpha);
        const double left = k.evaluate(Separation{alpha, 0.0}, t).value;
        if (left == 0.0) return 0.0;
        const auto inner = [&](double psi) {
            const double c = std::clamp(ca * std::cos(theta) + sa * std::sin(theta) * std::cos(psi), -1.0, 1.0);
            return area * sin_power(psi, dim - 2) * k.evaluate(Separation{std::acos(c), 0.0}, s).value;
        };
        const double spread = sa > 0.0 ? width / sa : kPi;
        const double breaks[] = {spread, 4.0 * spread};
        const double in = quad::integrate_pieces(inner, 0.0, kPi, breaks, 1e-300, 1e-10).value;
        return std::pow(radius, dim) * sin_power(alpha, dim - 1) * left * in;
    };
    const double breaks[] = {peak - 4.0 * width, peak - width, peak, peak + width, peak + 4.0 * width};
    return quad::integrate_pieces(outer, 0.0, kPi, breaks, 1e-300, 1e-9).value;
}

double gaussian_semigroup(const HeatKernel& k, double d, double t, double s) {
    const int n = k.space().dimension();
    const double w = std::sqrt(t * s / (t + s));
    const double peak = d * t / (t + s);
    const double reach = d + 40.0 * std::sqrt(std::max(t, s));
    const auto h = [&](double r, double time) { return k.evaluate(Separation{r, 0.0}, time).value; };
    const auto outer = [&](double rho) {
        const double left = h(rho, t);
        if (left == 0.0) return 0.0;
        if (n == 1) return left * (h(std::abs(d - rho), s) + h(d + rho, s));
        const double area = unit_sphere_area(n - 2);
        const auto inner = [&](double psi) {
            const double dist = std::sqrt(std::max(0.0, rho * rho + d * d - 2.0 * rho * d * std::cos(psi)));
            return area * sin_power(psi, n - 2) * h(dist, s);
        };
        const double spread = rho > 0.0 ? w / rho : kPi;
        const double breaks[] = {spread, 4.0 * spread};
        return std::pow(rho, n - 1) * left *
               quad::integrate_pieces(inner, 0.0, kPi, breaks, 1e-300, 1e-10).value;
    };
    const double breaks[] = {peak - 4.0 * w, peak - w, peak, peak + w, peak + 4.0 * w};
    return quad::integrate_pieces(outer, 0.0, reach, breaks, 1e-300, 1e-9).value;
}

// The cylinder kernel is a product, so the semigroup integral factorises into
// the sphere factor (computed on sphere:(n-1), whose radius matches) and the line.
double cylinder_semigroup(const HeatKernel& k, const Separation& sep, double t, double s) {
    const SolitonSpace& space = k.space();
    const int n = space.dimension();
    const HeatKernel sphere(SolitonSpace::make(SpaceKind::sphere, n - 1), 0.0, k.method(), k.params());
    const double sphere_part = sphere_semigroup(sphere, n - 1, *space.sphere_radius(), sep.primary, t, s);
    const double d = sep.line;
    const auto line = [&](double z) {
        return euclidean_kernel(1, z, t).value * euclidean_kernel(1, d - z, s).value;
    };
    const double reach = 40.0 * std::sqrt(std::max(t, s));
    const double peak = d * t / (t + s);
    const double breaks[] = {peak};
    const double line_part = quad::integrate_pieces(line, -reach, d + reach, breaks, 1e-300, 1e-11).value;
    return std::exp(-k.coupling() * space.sup_scalar_curvature() * (t + s)) * sphere_part * line_part;
}

double semigroup_integral(const HeatKernel& k, const Separation& sep, double t, double s) {
    const SolitonSpace& space = k.space();
    switch (space.kind()) {
        case SpaceKind::gaussian: return gaussian_semigroup(k, sep.primary, t, s);
        case SpaceKind::sphere: {
            const double damping = std::exp(-k.coupling() * space.sup_scalar_curvature() * (t + s));
            const HeatKernel laplace(space, 0.0, k.method(), k.params());
            return damping * sphere_semigroup(laplace, space.dimension(), *space.sphere_radius(),
                                              sep.primary, t, s);
        }
        case SpaceKind::cylinder: return cylinder_semigroup(k, sep, t, s);
    }
    return kNaN;
}

// Whether the kernel can be evaluated at time t: the zonal series stops at
// t_min on spheres without an image representation.
bool kernel_reaches(const HeatKernel& k, double t) {
    const SolitonSpace& space = k.space();
    if (space.kind() == SpaceKind::gaussian || t >= k.params().t_min) return true;
    if (k.method() != KernelMethod::closed_form) return false;
    const int dim = space.kind() == SpaceKind::sphere ? space.dimension() : space.dimension() - 1;
    return has_sphere_image_formula(dim);
}

// log int H(x, z, t)^2 e^{d^2(x, z) / (D t)} dv(z).
double log_weighted_energy(const HeatKernel& k, double t, double D) {
    const SolitonSpace& space = k.space();
    const int n = space.dimension();
    const double damping = -2.0 * k.coupling() * space.sup_scalar_curvature() * t;
    if (space.kind() == SpaceKind::gaussian) {
        // (4 pi t)^{-n} (2 pi t D / (D - 2))^{n/2}
        return -n * std::log(4.0 * kPi * t) + 0.5 * n * std::log(2.0 * kPi * t * D / (D - 2.0));
    }
    // Radial integral over a round sphere of dimension dim and the given radius.
    const auto sphere_part = [&](const HeatKernel& laplace, int dim, double r) {
        const double shift = 2.0 * laplace.evaluate(Separation{0.0, 0.0}, t).log_value;
        const auto f = [&](double rho) {
            const double weight = unit_sphere_area(dim - 1) * std::pow(r * std::sin(rho / r), dim - 1);
            if (!(weight > 0.0)) return 0.0;
            const double lh = laplace.evaluate(Separation{rho / r, 0.0}, t).log_value;
            return std::exp(2.0 * lh + rho * rho / (D * t) + std::log(weight) - shift);
        };
        const double w = std::sqrt(t);
        const double breaks[] = {w, 4.0 * w, 16.0 * w};
        const double v = quad::integrate_pieces(f, 0.0, kPi * r, breaks, 1e-300, 1e-11).value;
        return shift + std::log(v);
    };
    const double r = *space.sphere_radius();
    if (space.kind() == SpaceKind::sphere) {
        const HeatKernel laplace(space, 0.0, k.method(), k.params());
        return damping + sphere_part(laplace, n, r);
    }
    const HeatKernel laplace(SolitonSpace::make(SpaceKind::sphere, n - 1), 0.0, k.method(), k.params());
    // Line factor: int (4 pi t)^{-1} e^{-s^2/2t} e^{s^2/Dt} ds.
    const double line = -std::log(4.0 * kPi * t) + 0.5 * std::log(2.0 * kPi * t * D / (D - 2.0));
    return damping + sphere_part(laplace, n - 1, r) + line;
}

// ---------------------------------------------------------------- FD axioms

VerificationReport fd_axioms(const HeatKernel& kernel, int samples, std::uint64_t seed,
                             double tol) {
    const Stopwatch clock;
    VerificationReport rep = make_report("kernel-axioms", kernel.space(), kernel.coupling());
    rep.seed = seed;
    rep.tolerance = tol;
    const FdKernel& fd = kernel.fd();
    const DiscretizedOperator& op = fd.op();
    const int n = op.n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = INFINITY;
    const auto add = [&](std::string x, std::string y, double t, double lhs, double rhs) {
        rep.rows.push_back({rep.theorem_id, std::move(x), std::move(y), t, lhs, rhs, rhs - lhs});
        worst = std::min(worst, rhs - lhs);
    };

    // Weighted symmetry of the discrete operator underlies H(x, y) = H(y, x).
    double sym = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> u(op.m), v(op.m);
        for (int i = 0; i < op.m; ++i) {
            u[i] = unit(rng);
            v[i] = unit(rng);
        }
        const double lhs = op.weighted_inner(op.apply(u), v);
        const double rhs = op.weighted_inner(u, op.apply(v));
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        sym = std::max(sym, std::abs(lhs - rhs) / scale);
    }
    add("operator", "symmetry", kNaN, sym, 1e-12);
    rep.extracted["operator_symmetry_defect"] = sym;

    const std::vector<double> times = {0.1, 0.5, 1.0, 2.0};
    const auto profiles = fd.profiles(times);
    std::vector<double> sums(times.size());
    double max_mass = 0.0;
    double min_value = INFINITY;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double mass = fd.mass(profiles[j]);
        max_mass = std::max(max_mass, mass);
        add("x0", "mass", times[j], mass, 1.0);
        const double peak = *std::max_element(profiles[j].begin(), profiles[j].end());
        const double lowest = *std::min_element(profiles[j].begin(), profiles[j].end());
        min_value = std::min(min_value, lowest / peak);
    }
    rep.extracted["max_mass"] = max_mass;
    rep.extracted["min_relative_value"] = min_value;
    add("x0", "positivity", kNaN, -min_value, tol);

    // Diagonal semigroup: sum_i w_i u(r_i, t) u(r_i, s) = u(0, t + s).
    double semigroup = 0.0;
    const std::pair<std::size_t, std::size_t> combos[] = {{0, 0}, {0, 1}, {1, 1}, {1, 2}};
    const std::vector<double> sums_t = {0.2, 0.6, 1.0, 1.5};
    const auto targets = fd.profiles(sums_t);
    for (std::size_t c = 0; c < 4; ++c) {
        const auto [p, q] = combos[c];
        const double lhs = op.weighted_inner(profiles[p], profiles[q]);
        const double rhs = targets[c][0];
        const double rel = std::abs(lhs - rhs) / rhs;
        semigroup = std::max(semigroup, rel);
        add("x0", "semigroup", sums_t[c], rel, tol);
    }
    rep.extracted["semigroup_max_rel_error"] = semigroup;

    // Agreement with the closed form and the Dirichlet comparison H_B <= H, on
    // the extrapolated kernel. The single-grid excess is kept for reference.
    double agreement = 0.0;
    double overshoot = -INFINITY;
    double grid_overshoot = -INFINITY;
    kernel.prefetch(std::span(times).first(3));
    for (std::size_t j = 0; j < 3; ++j) {
        for (double r : {0.0, 1.0, 2.0, 4.0}) {
            const double exact = euclidean_kernel(n, r, times[j]).value;
            const double v = kernel.evaluate(Separation{r, 0.0}, times[j]).value;
            const double rel = std::abs(v - exact) / exact;
            agreement = std::max(agreement, rel);
            overshoot = std::max(overshoot, (v - exact) / exact);
            grid_overshoot = std::max(grid_overshoot, (fd.interpolate(profiles[j], r) - exact) / exact);
            char id[32];
            std::snprintf(id, sizeof id, "r=%g", r);
            add("x0", id, times[j], rel, tol);
        }
    }
    rep.flags["single_grid_max_relative_excess"] = grid_overshoot;
    rep.extracted["closed_form_max_rel_error"] = agreement;
    rep.extracted["max_relative_excess_over_closed_form"] = overshoot;

    // Exhaustion: the ball of half the radius, same spacing, lies below.
    const DiscretizedOperator half = discretize_radial(kernel.space(), 0.5 * op.r_max, op.m / 2,
                                                       op.a, op.shift);
    const FdKernel inner(half, fd.t0(), TimeStepping{kernel.params().dt_ratio, kernel.params().dt_max});
    const auto inner_profiles = inner.profiles(times);
    double exhaustion = -INFINITY;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double peak = profiles[j][0];
        for (int i = 0; i < half.m; ++i) {
            exhaustion = std::max(exhaustion, (inner_profiles[j][i] - profiles[j][i]) / peak);
        }
    }
    add("x0", "exhaustion", kNaN, exhaustion, tol);
    rep.extracted["exhaustion_max_relative_excess"] = exhaustion;

    rep.worst_case_slack = worst;
    finalize_slack(rep);
    rep.grid = {{"times", times}, {"semigroup_times", sums_t}, {"samples", samples}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

}  // namespace

// ---------------------------------------------------------------- kernel axioms

VerificationReport kernel_axioms(const HeatKernel& kernel, int samples, std::uint64_t seed,
                                 double tol) {
    if (kernel.method() == KernelMethod::fd_dirichlet) return fd_axioms(kernel, samples, seed, 1e-3);
    const Stopwatch clock;
    const SolitonSpace& space = kernel.space();
    VerificationReport rep = make_report("kernel-axioms", space, kernel.coupling());
    rep.seed = seed;
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(unit(rng) * std::log(hi / lo));
    };
    double worst = INFINITY;
    bool positive = true;
    const auto add = [&](std::string x, std::string y, double t, double lhs, double rhs) {
        rep.rows.push_back({rep.theorem_id, std::move(x), std::move(y), t, lhs, rhs, rhs - lhs});
        worst = std::min(worst, rhs - lhs);
    };
    const double constant_r = kernel.coupling() * space.sup_scalar_curvature();

    double sym = 0.0;
    double mass_defect = 0.0;
    double max_mass = 0.0;
    double semigroup = 0.0;
    for (int s = 0; s < samples; ++s) {
        const std::string id = "s" + std::to_string(s);
        const Point x = space.random_point(rng);
        const Point y = space.random_point(rng);
        const double t = log_uniform(0.05, 2.0);
        const KernelValue hxy = kernel.evaluate(x, y, t);
        const KernelValue hyx = kernel.evaluate(y, x, t);
        const double rel = std::abs(hxy.value - hyx.value) / std::max(hxy.value, 1e-300);
        sym = std::max(sym, rel);
        add(id, "symmetry", t, rel, 1e-10);
        if (!(hxy.value > 0.0) || !std::isfinite(hxy.log_value)) positive = false;
        add(id, "positivity", t, 0.0, hxy.value);

        const double mass = kernel_mass(kernel, t);
        max_mass = std::max(max_mass, mass);
        // Constant R: the mass is exactly e^{-a R t} on these stochastically complete spaces.
        mass_defect = std::max(mass_defect, std::abs(mass - std::exp(-constant_r * t)));
        add(id, "mass", t, mass, 1.0);

        // Semigroup at a separation within two diffusion lengths of t + s.
        const double t1 = log_uniform(0.1, 1.0);
        const double t2 = log_uniform(0.1, 1.0);
        const double reach = 2.0 * std::sqrt(t1 + t2) * unit(rng);
        Separation sep;
        switch (space.kind()) {
            case SpaceKind::gaussian: sep = {reach, 0.0}; break;
            case SpaceKind::sphere: sep = {std::min(reach / *space.sphere_radius(), kPi), 0.0}; break;
            case SpaceKind::cylinder: {
                const double share = unit(rng);
                sep = {std::min(reach * share / *space.sphere_radius(), kPi), reach * (1.0 - share)};
                break;
            }
        }
        const double lhs = semigroup_integral(kernel, sep, t1, t2);
        const double rhs = kernel.evaluate(sep, t1 + t2).value;
        const double srel = std::abs(lhs - rhs) / rhs;
        semigroup = std::max(semigroup, srel);
        add(id, "semigroup", t1 + t2, srel, 1e-3);
    }
    rep.extracted["symmetry_max_rel_defect"] = sym;
    rep.extracted["max_mass"] = max_mass;
    rep.extracted["mass_minus_exp_aRt_max"] = mass_defect;
    rep.extracted["semigroup_max_rel_error"] = semigroup;
    rep.flags["positivity"] = positive;
    rep.worst_case_slack = worst;
    finalize_slack(rep);
    rep.passed = rep.passed && positive && mass_defect <= 1e-6;
    rep.grid = {{"samples", samples}, {"t_range", {0.05, 2.0}}, {"semigroup_t_range", {0.1, 1.0}}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------- ultracontractivity

VerificationReport ultracontractivity(const HeatKernel& kernel, double mu, const GridSpec& grid,
                                      double tol) {
    const Stopwatch clock;
    const SolitonSpace& space = kernel.space();
    const int n = space.dimension();
    VerificationReport rep = make_report("ultracontractivity", space, kernel.coupling());
    rep.slack_kind = "ratio";
    rep.tolerance = tol;
    const auto pairs = pair_grid(space, grid.pairs);
    const auto times = log_grid(grid.times, grid.t_lo, grid.t_hi);
    double best = -INFINITY;
    std::string arg_pair;
    double arg_t = 0.0;
    double diag_dev = 0.0;
    double off_max = -INFINITY;
    for (const PairPoint& p : pairs) {
        for (double t : times) {
            const KernelValue h = kernel.evaluate(p.separation, t);
            const double ratio = std::exp(h.log_value + 0.5 * n * std::log(4.0 * kPi * t) + mu);
            rep.rows.push_back({rep.theorem_id, "x0", p.id, t, ratio, 1.0, 1.0 - ratio});
            if (ratio > best) {
                best = ratio;
                arg_pair = p.id;
                arg_t = t;
            }
            if (p.distance == 0.0) {
                diag_dev = std::max(diag_dev, std::abs(ratio - 1.0));
            } else {
                off_max = std::max(off_max, ratio);
            }
        }
    }
    rep.worst_case_slack = best;
    rep.extracted["max_ratio"] = best;
    rep.extracted["argmax"] = {{"y_id", arg_pair}, {"t", arg_t}};
    rep.extracted["offdiagonal_max_ratio"] = off_max;
    if (space.kind() == SpaceKind::gaussian) {
        rep.extracted["diagonal_max_deviation_from_1"] = diag_dev;
    } else {
        const KernelValue h0 = kernel.evaluate(Separation{}, times.front());
        rep.extracted["diagonal_ratio_at_t_lo"] =
            std::exp(h0.log_value + 0.5 * n * std::log(4.0 * kPi * times.front()) + mu);
    }
    finalize_slack(rep);
    rep.grid = {{"pairs", grid.pairs}, {"times", grid.times}, {"t_lo", grid.t_lo}, {"t_hi", grid.t_hi}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------- gaussian bound

VerificationReport gaussian_bound(const HeatKernel& kernel, double mu, const GridSpec& grid,
                                  const Tolerances& tol) {
    for (double c : grid.c) {
        if (!(c > 4.0)) {
            throw Error(ErrorCode::invalid_argument, "gaussian bound requires c > 4 (got " +
                                                         std::to_string(c) + ")");
        }
    }
    const Stopwatch clock;
    const SolitonSpace& space = kernel.space();
    const int n = space.dimension();
    VerificationReport rep = make_report("gaussian-bound", space, kernel.coupling());
    rep.tolerance = tol.refinement;
    rep.slack_kind = "slack";

    // One kernel evaluation per refined grid point; the coarse grid is every other point.
    const auto pairs = pair_grid(space, refined_count(grid.pairs));
    const auto times = log_grid(refined_count(grid.times), grid.t_lo, grid.t_hi);
    // Points where the kernel is below its own error estimate (far off-diagonal
    // zonal series at small t) cannot bound anything and are left out.
    std::vector<std::vector<double>> base(pairs.size(), std::vector<double>(times.size(), kNaN));
    std::size_t unresolved = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double t = times[j];
            const KernelValue kv = kernel.evaluate(pairs[i].separation, t);
            if (!(kv.relative_error <= 1e-6)) {
                ++unresolved;
                continue;
            }
            base[i][j] = kv.log_value + 0.5 * n * std::log(4.0 * kPi * t) + mu;
        }
    }
    rep.flags["unresolved_points"] = unresolved;

    bool all_ok = true;
    double worst_change = 0.0;
    double worst_split = -INFINITY;
    nlohmann::json per_c = nlohmann::json::array();
    for (double c : grid.c) {
        double coarse = -INFINITY;
        double fine = -INFINITY;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double d2 = pairs[i].distance * pairs[i].distance;
            for (std::size_t j = 0; j < times.size(); ++j) {
                if (std::isnan(base[i][j])) continue;
                const double v = base[i][j] + d2 / (c * times[j]);
                fine = std::max(fine, v);
                if (i % 2 == 0 && j % 2 == 0) coarse = std::max(coarse, v);
            }
        }
        const double a_coarse = std::exp(coarse);
        const double a_fine = std::exp(fine);
        const double change = (a_fine - a_coarse) / a_coarse;
        const bool ok = std::isfinite(a_fine) && change < tol.refinement;
        all_ok = all_ok && ok;
        worst_change = std::max(worst_change, change);

        // Splitting with D = c/2: H(x,y,t) e^{d^2/ct} <= E_D(t/2) on homogeneous spaces.
        const double D = 0.5 * c;
        double split = -INFINITY;
        const std::string label = c_label(rep.theorem_id, c);
        for (std::size_t j = 0; j < times.size(); j += 2) {
            const double t = times[j];
            const bool splittable = kernel_reaches(kernel, 0.5 * t);
            const double log_e = splittable ? log_weighted_energy(kernel, 0.5 * t, D) : kNaN;
            for (std::size_t i = 0; i < pairs.size(); i += 2) {
                if (std::isnan(base[i][j])) continue;
                const double d2 = pairs[i].distance * pairs[i].distance;
                const double log_lhs = base[i][j] - 0.5 * n * std::log(4.0 * kPi * t) - mu + d2 / (c * t);
                if (splittable) split = std::max(split, log_lhs - log_e);
                const double lhs = std::exp(base[i][j] + d2 / (c * t));
                rep.rows.push_back({label, "x0", pairs[i].id, t, lhs, a_fine, a_fine - lhs});
            }
        }
        const double split_ratio = std::exp(split);
        worst_split = std::max(worst_split, split_ratio);
        const bool split_ok = split_ratio <= 1.0 + tol.analytic;
        all_ok = all_ok && split_ok;
        per_c.push_back({{"c", c},
                         {"A_emp", a_coarse},
                         {"A_emp_refined", a_fine},
                         {"relative_change", change},
                         {"stable", ok},
                         {"splitting_D", D},
                         {"splitting_max_ratio", split_ratio}});
    }
    rep.extracted["A_emp"] = per_c;
    rep.extracted["max_relative_change"] = worst_change;
    rep.extracted["splitting_max_ratio"] = worst_split;
    std::size_t unsplit = 0;
    for (std::size_t j = 0; j < times.size(); j += 2) unsplit += kernel_reaches(kernel, 0.5 * times[j]) ? 0 : 1;
    rep.flags["splitting_times_skipped"] = unsplit;
    rep.worst_case_slack = tol.refinement - worst_change;
    rep.passed = all_ok;
    rep.grid = {{"pairs", grid.pairs},
                {"pairs_refined", pairs.size()},
                {"times", grid.times},
                {"times_refined", times.size()},
                {"t_lo", grid.t_lo},
                {"t_hi", grid.t_hi},
                {"c", grid.c}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------- C_R bound

VerificationReport cr_bound(const HeatKernel& laplace, double mu, double c_r, const GridSpec& grid,
                            double tol) {
    if (laplace.coupling() != 0.0) {
        throw Error(ErrorCode::invalid_argument, "cr-bound applies to the Laplace kernel (a = 0)");
    }
    const Stopwatch clock;
    const SolitonSpace& space = laplace.space();
    const int n = space.dimension();
    VerificationReport rep = make_report("cr-bound", space, 0.0);
    rep.slack_kind = "ratio";
    rep.tolerance = tol;
    const auto pairs = pair_grid(space, grid.pairs);
    const auto times = log_grid(grid.times, grid.t_lo, grid.t_hi);
    double worst6 = -INFINITY;
    double worst12 = -INFINITY;
    for (const PairPoint& p : pairs) {
        for (double t : times) {
            const double base = laplace.evaluate(p.separation, t).log_value +
                                0.5 * n * std::log(4.0 * kPi * t) + mu;
            const double r6 = std::exp(base - c_r * t / 6.0);
            const double r12 = std::exp(base - c_r * t / 12.0);
            worst6 = std::max(worst6, r6);
            worst12 = std::max(worst12, r12);
            rep.rows.push_back({rep.theorem_id, "x0", p.id, t, r6, 1.0, 1.0 - r6});
        }
    }
    rep.worst_case_slack = worst6;
    rep.extracted["C_R"] = c_r;
    rep.extracted["max_ratio"] = worst6;
    rep.flags["max_ratio_exponent_12"] = worst12;
    rep.flags["exponent_12_holds"] = worst12 <= 1.0 + tol;
    finalize_slack(rep);
    rep.grid = {{"pairs", grid.pairs}, {"times", grid.times}, {"t_lo", grid.t_lo}, {"t_hi", grid.t_hi}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------- Green bound

VerificationReport green_bound(const GreenFunction& green, double mu, const GridSpec& grid,
                               const Tolerances& tol) {
    const Stopwatch clock;
    const SolitonSpace& space = green.space();
    const int n = space.dimension();
    VerificationReport rep = make_report("green-bound", space, green.coupling());
    rep.tolerance = tol.refinement;

    const auto pairs = pair_grid(space, refined_count(grid.pairs));
    double coarse = -INFINITY;
    double fine = -INFINITY;
    std::vector<double> values(pairs.size(), kNaN);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const double g = green.evaluate(pairs[i].separation).value;
        const double b = g * std::pow(pairs[i].distance, n - 2) * std::exp(mu);
        values[i] = b;
        fine = std::max(fine, b);
        if (i % 2 == 0) coarse = std::max(coarse, b);
    }
    for (std::size_t i = 2; i < pairs.size(); i += 2) {
        rep.rows.push_back({rep.theorem_id, "x0", pairs[i].id, kNaN, values[i], fine, fine - values[i]});
    }
    const double change = (fine - coarse) / coarse;

    // Small-separation slope of log G against log d (expected 2 - n).
    const double ds[] = {0.02, 0.04, 0.08};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double d : ds) {
        Separation sep;
        if (space.kind() == SpaceKind::gaussian) {
            sep = {d, 0.0};
        } else {
            sep = {d / *space.sphere_radius(), 0.0};
        }
        const double x = std::log(d);
        const double y = std::log(green.evaluate(sep).value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = 3.0;
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double expected = 2.0 - n;
    const double slope_error = std::abs(slope - expected) / std::abs(expected);

    rep.extracted["B_emp"] = coarse;
    rep.extracted["B_emp_refined"] = fine;
    rep.extracted["relative_change"] = change;
    rep.extracted["small_separation_slope"] = slope;
    rep.extracted["expected_slope"] = expected;
    rep.extracted["slope_relative_error"] = slope_error;
    rep.worst_case_slack = tol.refinement - change;
    rep.passed = std::isfinite(fine) && change < tol.refinement && slope_error < 0.05;
    rep.grid = {{"pairs", grid.pairs}, {"pairs_refined", pairs.size()}, {"slope_separations", ds}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------- eigenvalues

VerificationReport eigenvalue_bound(const Spectrum& spectrum, int n, double mu, double volume,
                                    int k_max, const GridSpec& grid, double tol) {
    if (k_max < 1) throw Error(ErrorCode::invalid_argument, "k_max must be >= 1");
    if (spectrum.size() < static_cast<std::size_t>(k_max)) {
        throw Error(ErrorCode::invalid_argument, "spectrum holds fewer than k_max eigenvalues");
    }
    const Stopwatch clock;
    VerificationReport rep;
    rep.theorem_id = "eigenvalue-bound";
    rep.space = "sphere:" + std::to_string(n);
    rep.a = spectrum.coupling();
    rep.tolerance = tol;
    const std::vector<double> lambda = spectrum.expanded(k_max);
    const double em = std::exp(mu);
    double worst = INFINITY;
    for (int k = 1; k <= k_max; ++k) {
        // lambda_k >= (2 n pi / e) (k e^mu / V)^{2/n}
        const double bound = 2.0 * n * kPi / std::numbers::e * std::pow(k * em / volume, 2.0 / n);
        const double lk = lambda[k - 1];
        const double slack = (lk - bound) / bound;
        worst = std::min(worst, slack);
        rep.rows.push_back({"eigenvalue-bound[lambda]", "k=" + std::to_string(k), "-", kNaN, bound, lk, slack});
    }
    rep.extracted["lambda_1"] = lambda.front();
    rep.extracted["bound_1"] = 2.0 * n * kPi / std::numbers::e * std::pow(em / volume, 2.0 / n);

    const auto times = log_grid(grid.times, grid.t_lo, grid.t_hi);
    double partition_worst = INFINITY;
    for (double t : times) {
        const double lhs = partition_function(spectrum, t).total();
        const double rhs = volume / em * std::pow(4.0 * kPi * t, -0.5 * n);
        const double slack = (rhs - lhs) / rhs;
        partition_worst = std::min(partition_worst, slack);
        rep.rows.push_back({"eigenvalue-bound[partition]", "x0", "x0", t, lhs, rhs, slack});
    }
    worst = std::min(worst, partition_worst);
    rep.extracted["partition_min_relative_slack"] = partition_worst;

    // e^{lambda t} (4 pi t)^{-n/2} is minimised at t0 = n / (2 lambda).
    int calculus_violations = 0;
    for (int k : {1, 2, 10, 100, k_max}) {
        const double lk = lambda[std::min(k, k_max) - 1];
        if (!(lk > 0.0)) continue;
        const auto g = [&](double t) { return lk * t - 0.5 * n * std::log(4.0 * kPi * t); };
        const double t0 = 0.5 * n / lk;
        for (int j = -20; j <= 20; ++j) {
            if (j != 0 && g(t0 * std::exp(0.05 * j)) < g(t0) - 1e-12) ++calculus_violations;
        }
    }
    rep.extracted["t0_minimiser_violations"] = calculus_violations;

    // Weyl: lambda_k ~ c(n) (k / V)^{2/n}, c(n) = 4 pi^2 omega_n^{-2/n}.
    const double c_n = 4.0 * kPi * kPi * std::pow(unit_ball_volume(n), -2.0 / n);
    double weyl_lo = INFINITY, weyl_hi = -INFINITY;
    if (k_max >= 400) {
        for (int k = 200; k <= 400; ++k) {
            const double ratio = lambda[k - 1] / (c_n * std::pow(k / volume, 2.0 / n));
            weyl_lo = std::min(weyl_lo, ratio);
            weyl_hi = std::max(weyl_hi, ratio);
        }
        rep.extracted["weyl_ratio_range"] = {weyl_lo, weyl_hi};
    }
    const bool weyl_ok = k_max < 400 || (weyl_lo >= 0.9 && weyl_hi <= 1.1);
    if (n == 2) {
        rep.extracted["weyl_within_10_percent"] = weyl_ok;
    } else {
        rep.flags["weyl_within_10_percent"] = weyl_ok;
    }
    rep.worst_case_slack = worst;
    finalize_slack(rep);
    rep.passed = rep.passed && calculus_violations == 0 && (n != 2 || weyl_ok);
    rep.grid = {{"k_max", k_max}, {"times", grid.times}, {"t_lo", grid.t_lo}, {"t_hi", grid.t_hi}};
    rep.runtime_seconds = clock.seconds();
    return rep;
}

}  // namespace solitonlab
