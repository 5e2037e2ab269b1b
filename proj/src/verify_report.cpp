#include <cmath>
#include <cstdio>
#include <numbers>

#include "solitonlab/error.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

nlohmann::json GridSpec::to_json() const {
    return {{"pairs", pairs},
            {"times", times},
            {"t_lo", t_lo},
            {"t_hi", t_hi},
            {"c", c},
            {"taus", taus},
            {"tau_lo", tau_lo},
            {"tau_hi", tau_hi},
            {"log_sobolev_trials", log_sobolev_trials},
            {"sobolev_trials", sobolev_trials},
            {"axiom_samples", axiom_samples},
            {"k_max", k_max},
            {"D", D},
            {"gamma", gamma},
            {"tail_radii", tail_radii},
            {"probe_times", probe_times},
            {"probe_t_lo", probe_t_lo},
            {"probe_t_hi", probe_t_hi},
            {"energy_trials", energy_trials},
            {"energy_r_max", energy_r_max},
            {"energy_m", energy_m}};
}

std::vector<PairPoint> pair_grid(const SolitonSpace& space, int count) {
    if (count < 2) throw Error(ErrorCode::invalid_argument, "pair grid needs at least 2 points");
    std::vector<PairPoint> out;
    out.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double u = static_cast<double>(j) / (count - 1);
        PairPoint p;
        switch (space.kind()) {
            case SpaceKind::gaussian: p.separation = {8.0 * u * u, 0.0}; break;
            case SpaceKind::sphere: p.separation = {std::numbers::pi * u, 0.0}; break;
            case SpaceKind::cylinder: p.separation = {std::numbers::pi * u, 6.0 * u * u}; break;
        }
        p.distance = space.separation_distance(p.separation);
        char buf[32];
        std::snprintf(buf, sizeof buf, "u=%.6g", u);
        p.id = buf;
        out.push_back(p);
    }
    return out;
}

std::vector<double> log_grid(int count, double lo, double hi) {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo)) {
        throw Error(ErrorCode::invalid_argument, "invalid log grid");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / (count - 1);
    for (int j = 0; j < count; ++j) out[j] = lo * std::exp(step * j);
    out.back() = hi;
    return out;
}

nlohmann::json VerificationReport::to_json(bool with_rows) const {
    nlohmann::json j = {{"theorem_id", theorem_id},
                        {"space", space},
                        {"a", a},
                        {"seed", seed},
                        {"grid", grid},
                        {"slack_kind", slack_kind},
                        {"worst_case_slack", std::isfinite(worst_case_slack)
                                                 ? nlohmann::json(worst_case_slack)
                                                 : nlohmann::json(nullptr)},
                        {"tolerance", tolerance},
                        {"extracted_constants", extracted},
                        {"flags", flags},
                        {"passed", passed},
                        {"gating", gating},
                        {"row_count", rows.size()},
                        {"timing", {{"runtime_seconds", runtime_seconds}}}};
    if (!error.empty()) j["error"] = error;
    if (with_rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const ReportRow& row : rows) {
            r.push_back({row.theorem_id, row.x_id, row.y_id, row.t, row.lhs, row.rhs, row.slack});
        }
        j["rows"] = std::move(r);
    }
    return j;
}

std::uint64_t check_seed(std::uint64_t seed, std::string_view theorem_id) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : theorem_id) {
        h ^= c;
        h *= 1099511628211ull;
    }
    // splitmix64 finaliser
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void finalize_slack(VerificationReport& report) {
    if (report.slack_kind == "ratio") {
        report.passed = std::isfinite(report.worst_case_slack) &&
                        report.worst_case_slack <= 1.0 + report.tolerance;
    } else {
        report.passed = std::isfinite(report.worst_case_slack) &&
                        report.worst_case_slack >= -report.tolerance;
    }
}

}  // namespace solitonlab
