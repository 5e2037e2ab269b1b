#include "solitonlab/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "solitonlab/entropy.hpp"
#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

bool has_green(const SolitonSpace& space) {
    const int n = space.dimension();
    switch (space.kind()) {
        case SpaceKind::gaussian: return n >= 3;
        // The Green head integral needs the kernel down to t = 0, which the
        // image formulas on S^2 and S^3 provide.
        case SpaceKind::sphere: return n == 3;
        case SpaceKind::cylinder: return n == 3 || n == 4;
    }
    return false;
}

// Degree cap that resolves the partition function at the smallest grid time.
int spectrum_degree(const SolitonSpace& space, const GridSpec& grid) {
    const double r = *space.sphere_radius();
    return std::max(50, static_cast<int>(std::ceil(r * std::sqrt(60.0 / grid.t_lo))));
}

}  // namespace

std::vector<std::string> suite_checks(const SolitonSpace& space) {
    const int n = space.dimension();
    std::vector<std::string> out = {"kernel-axioms"};
    if (space.kind() == SpaceKind::gaussian) out.push_back("kernel-axioms[fd]");
    out.insert(out.end(), {"ultracontractivity", "gaussian-bound", "cr-bound"});
    if (has_green(space)) out.push_back("green-bound");
    if (space.kind() == SpaceKind::sphere) out.push_back("eigenvalue-bound");
    out.push_back("log-sobolev");
    if (n >= 3) out.push_back("sobolev");
    if (space.kind() == SpaceKind::gaussian) {
        out.push_back("energy-monotonicity");
        out.push_back("weighted-energy");
    }
    out.push_back("grigoryan-constants");
    return out;
}

VerificationReport run_check(const ExperimentConfig& config, std::string_view id) {
    const SolitonSpace space = SolitonSpace::parse(config.space);
    const double a = config.a;
    const double mu = mu_closed_form(space);
    const GridSpec& grid = config.grid;
    const Tolerances& tol = config.tolerances;
    const std::string base_id(id.substr(0, id.find('[')));
    const std::uint64_t seed = check_seed(config.seed, id);
    const auto kernel = [&](double coupling) { return HeatKernel(space, coupling, config.method, config.kernel); };

    VerificationReport rep;
    if (id == "kernel-axioms[fd]") {
        const HeatKernel fd(space, a, KernelMethod::fd_dirichlet, config.kernel);
        rep = kernel_axioms(fd, grid.axiom_samples, seed, tol.fd);
        rep.theorem_id = "kernel-axioms[fd]";
    } else if (id == "kernel-axioms") {
        const HeatKernel k = kernel(a);
        rep = kernel_axioms(k, grid.axiom_samples, seed,
                            config.method == KernelMethod::fd_dirichlet ? tol.fd : tol.analytic);
    } else if (id == "ultracontractivity") {
        rep = ultracontractivity(kernel(a), mu, grid, tol.analytic);
    } else if (id == "gaussian-bound") {
        rep = gaussian_bound(kernel(a), mu, grid, tol);
    } else if (id == "cr-bound") {
        rep = cr_bound(kernel(0.0), mu, space.sup_scalar_curvature(), grid, tol.analytic);
    } else if (id == "green-bound") {
        rep = green_bound(GreenFunction(space, a, config.kernel), mu, grid, tol);
    } else if (id == "eigenvalue-bound") {
        if (space.kind() != SpaceKind::sphere) {
            throw Error(ErrorCode::kind_mismatch, "eigenvalue-bound needs a closed soliton (sphere:n)");
        }
        const Spectrum spectrum = sphere_spectrum(space.dimension(), a, spectrum_degree(space, grid));
        rep = eigenvalue_bound(spectrum, space.dimension(), mu, *space.total_volume(), grid.k_max, grid,
                               tol.analytic);
    } else if (id == "log-sobolev") {
        rep = log_sobolev(space, mu, grid, seed, tol.analytic);
        rep.a = a;
    } else if (id == "sobolev") {
        rep = sobolev(space, a, mu, grid, seed, tol);
    } else if (id == "energy-monotonicity") {
        rep = energy_monotonicity(space, a, grid, seed, tol.analytic);
    } else if (id == "weighted-energy") {
        if (space.kind() != SpaceKind::gaussian) {
            throw Error(ErrorCode::kind_mismatch, "weighted-energy runs on the Dirichlet ball of gaussian:n");
        }
        const HeatKernel fd(space, a, KernelMethod::fd_dirichlet, config.kernel);
        rep = weighted_energy_bound(fd, mu, grid, tol.fd);
    } else if (id == "grigoryan-constants") {
        rep = grigoryan_report(grid.gamma, grid.D);
        rep.space = space.descriptor();
        rep.a = a;
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown check '" + std::string(id) + "'");
    }
    rep.seed = config.seed;
    // On gaussian:n R vanishes, so L does not depend on a and every a is in range.
    if (requires_quarter_coupling(base_id) && a < 0.25 && space.kind() != SpaceKind::gaussian) {
        rep.gating = false;
    }
    return rep;
}

unsigned thread_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("SOLITONLAB_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

SuiteResult run_suite(const ExperimentConfig& config, const std::vector<std::string>& checks) {
    SuiteResult result;
    result.reports.resize(checks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < checks.size(); i = next++) {
            try {
                result.reports[i] = run_check(config, checks[i]);
            } catch (const std::exception& e) {
                VerificationReport& r = result.reports[i];
                r.theorem_id = checks[i];
                r.space = config.space;
                r.a = config.a;
                r.seed = config.seed;
                r.passed = false;
                r.worst_case_slack = NAN;
                r.error = e.what();
            }
        }
    };
    const unsigned threads = std::min<unsigned>(thread_count(), std::max<std::size_t>(1, checks.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& r : result.reports) {
        if (r.gating && !r.passed) result.exit_code = 1;
    }
    return result;
}

SuiteResult run_suite(const ExperimentConfig& config) {
    if (!config.theorem.empty()) return run_suite(config, {config.theorem});
    return run_suite(config, suite_checks(SolitonSpace::parse(config.space)));
}

nlohmann::json suite_json(const ExperimentConfig& config, const SuiteResult& result, bool with_rows) {
    nlohmann::json reports = nlohmann::json::array();
    const std::string hash = config.hash();
    for (const auto& r : result.reports) {
        nlohmann::json j = r.to_json(with_rows);
        j["config_hash"] = hash;
        reports.push_back(std::move(j));
    }
    return {{"version", SOLITONLAB_VERSION},
            {"config", config.to_json()},
            {"config_hash", hash},
            {"passed", result.exit_code == 0},
            {"exit_code", result.exit_code},
            {"reports", std::move(reports)}};
}

std::string csv_file_name(std::string_view theorem_id) {
    std::string out;
    for (char c : theorem_id) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
        if (keep) {
            out += c;
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out + ".csv";
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_rows(const std::string& path, const std::string& space, double a,
                const std::vector<ReportRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
    out << "theorem_id,space,a,x_id,y_id,t,lhs,rhs,slack\n";
    const std::string prefix = "," + csv_field(space) + "," + num(a) + ",";
    for (const ReportRow& r : rows) {
        out << csv_field(r.theorem_id) << prefix << csv_field(r.x_id) << ',' << csv_field(r.y_id) << ','
            << num(r.t) << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.slack) << '\n';
    }
    if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

double json_number(const nlohmann::json& j) { return j.is_number() ? j.get<double>() : NAN; }

}  // namespace

void write_csv(const VerificationReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_rows((std::filesystem::path(dir) / csv_file_name(report.theorem_id)).string(), report.space,
               report.a, report.rows);
}

void emit_plot_data(const nlohmann::json& document, const std::string& dir) {
    if (!document.contains("reports") || !document["reports"].is_array()) {
        throw Error(ErrorCode::invalid_argument, "report document has no 'reports' array");
    }
    std::filesystem::create_directories(dir);
    for (const auto& r : document["reports"]) {
        std::vector<ReportRow> rows;
        if (r.contains("rows")) {
            for (const auto& row : r["rows"]) {
                if (!row.is_array() || row.size() != 7) {
                    throw Error(ErrorCode::invalid_argument, "malformed report row");
                }
                rows.push_back({row[0].get<std::string>(), row[1].get<std::string>(), row[2].get<std::string>(),
                                json_number(row[3]), json_number(row[4]), json_number(row[5]),
                                json_number(row[6])});
            }
        }
        const std::string id = r.at("theorem_id").get<std::string>();
        write_rows((std::filesystem::path(dir) / csv_file_name(id)).string(), r.at("space").get<std::string>(),
                   json_number(r.at("a")), rows);
    }
}

}  // namespace solitonlab
