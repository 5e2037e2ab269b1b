// solitonlab command line. Exit codes: 0 success / all checks pass,
// 1 a check found a violation or failed, 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "solitonlab/config.hpp"
#include "solitonlab/entropy.hpp"
#include "solitonlab/error.hpp"
#include "solitonlab/kernels.hpp"
#include "solitonlab/runner.hpp"
#include "solitonlab/spectral.hpp"

using namespace solitonlab;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Point make_point(const SolitonSpace& space, const std::vector<double>& coords) {
    return coords.empty() ? space.origin() : space.point_from_coords(coords);
}

json space_json(const SolitonSpace& s) {
    const IdentityReport id = check_soliton_identities(s, 100, 1);
    return {{"space", s.descriptor()},
            {"kind", std::string(to_string(s.kind()))},
            {"n", s.dimension()},
            {"sphere_radius", optional_number(s.sphere_radius())},
            {"sup_R", s.sup_scalar_curvature()},
            {"volume", optional_number(s.total_volume())},
            {"mu", mu_closed_form(s)},
            {"identity_defects", {{"trace", id.max_trace_defect}, {"laplacian", id.max_laplacian_defect}}}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solitonlab: heat kernel inequalities on closed-form Ricci shrinkers"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", SOLITONLAB_VERSION);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool as_json = false;
    std::string csv_dir;
    app.add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--json", as_json, "print JSON");
    app.add_option("--csv", csv_dir, "directory for per-point CSV files");

    // Shared selection options.
    std::string space_token;
    std::optional<double> a;
    std::string method_name;

    auto* spaces_cmd = app.add_subcommand("spaces", "list the catalogue or describe one space");
    spaces_cmd->add_option("--space", space_token, "gaussian:N, sphere:N or cylinder:N");

    auto* mu_cmd = app.add_subcommand("mu", "entropy mu(g, 1) with quadrature cross-check");
    mu_cmd->add_option("--space", space_token)->required();

    int l_max = 10;
    double r_max = 40.0;
    int grid_m = 2048;
    int k_count = 20;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of -Lap + aR as CSV");
    spectrum_cmd->add_option("--space", space_token)->required();
    spectrum_cmd->add_option("--a", a, "coupling (default 0.25)");
    spectrum_cmd->add_option("--l-max", l_max, "sphere: largest harmonic degree");
    spectrum_cmd->add_option("--r-max", r_max, "gaussian: Dirichlet radius");
    spectrum_cmd->add_option("--m", grid_m, "gaussian: radial unknowns");
    spectrum_cmd->add_option("--k", k_count, "gaussian: number of eigenvalues");

    double t = 1.0;
    std::vector<double> x_coords, y_coords;
    auto* kernel_cmd = app.add_subcommand("kernel", "evaluate H^R(x, y, t)");
    kernel_cmd->add_option("--space", space_token)->required();
    kernel_cmd->add_option("--a", a);
    kernel_cmd->add_option("--method", method_name, "closed_form, series or fd");
    kernel_cmd->add_option("--t", t)->required();
    kernel_cmd->add_option("--x", x_coords, "coordinates of x (default: origin)")->delimiter(',');
    kernel_cmd->add_option("--y", y_coords, "coordinates of y (default: origin)")->delimiter(',');

    auto* green_cmd = app.add_subcommand("green", "evaluate G^R(x, y)");
    green_cmd->add_option("--space", space_token)->required();
    green_cmd->add_option("--a", a);
    green_cmd->add_option("--x", x_coords)->delimiter(',');
    green_cmd->add_option("--y", y_coords)->delimiter(',')->required();

    std::string theorem;
    std::vector<double> c_list;
    std::optional<double> D, gamma;
    std::vector<double> tau_grid;
    std::string out_path;
    bool exploratory = false;
    auto* verify_cmd = app.add_subcommand("verify", "run one theorem check");
    verify_cmd->add_option("theorem", theorem, "theorem id")->required();
    for (CLI::App* cmd : {verify_cmd}) {
        cmd->add_option("--space", space_token);
        cmd->add_option("--a", a);
        cmd->add_option("--method", method_name);
        cmd->add_option("--c", c_list, "Gaussian-bound exponents")->delimiter(',');
        cmd->add_option("--D", D);
        cmd->add_option("--gamma", gamma);
        cmd->add_option("--tau-grid", tau_grid, "lo,hi,count")->delimiter(',')->expected(3);
        cmd->add_option("--out", out_path, "write the full JSON report (with rows)");
        cmd->add_flag("--exploratory", exploratory, "allow a < 1/4");
    }
    auto* suite_cmd = app.add_subcommand("suite", "run every applicable check");
    suite_cmd->add_option("--space", space_token);
    suite_cmd->add_option("--a", a);
    suite_cmd->add_option("--out", out_path, "write the full JSON report (with rows)");

    std::string report_path;
    auto* plot_cmd = app.add_subcommand("plot-data", "write per-theorem CSVs from a JSON report");
    plot_cmd->add_option("report", report_path)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto build_config = [&](bool for_verify) {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (!space_token.empty()) config.space = space_token;
        if (a) config.a = *a;
        if (seed) config.seed = *seed;
        if (!method_name.empty()) config.method = parse_kernel_method(method_name);
        if (!csv_dir.empty()) config.csv_dir = csv_dir;
        if (!out_path.empty()) config.json_path = out_path;
        if (for_verify) {
            if (!is_theorem_id(theorem)) throw UsageError("unknown theorem id '" + theorem + "'");
            config.theorem = theorem;
            if (!c_list.empty()) config.grid.c = c_list;
            if (D) config.grid.D = *D;
            if (gamma) config.grid.gamma = *gamma;
            if (!tau_grid.empty()) {
                config.grid.tau_lo = tau_grid[0];
                config.grid.tau_hi = tau_grid[1];
                config.grid.taus = static_cast<int>(tau_grid[2]);
                if (!(tau_grid[0] > 0.0) || tau_grid[1] < tau_grid[0] || config.grid.taus < 1) {
                    throw UsageError("--tau-grid expects lo,hi,count with 0 < lo <= hi and count >= 1");
                }
            }
            if (exploratory) config.exploratory = true;
            if (!(config.grid.D > 2.0) || !(config.grid.gamma > 1.0)) {
                throw UsageError("need D > 2 and gamma > 1");
            }
        } else {
            config.theorem.clear();
        }
        validate(config);
        return config;
    };

    const auto run = [&](bool for_verify) {
        ExperimentConfig config;
        try {
            config = build_config(for_verify);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
        const SuiteResult result = for_verify ? run_suite(config, {config.theorem}) : run_suite(config);
        for (const auto& r : result.reports) {
            if (!config.csv_dir.empty()) write_csv(r, config.csv_dir);
        }
        if (!config.json_path.empty()) write_text(config.json_path, suite_json(config, result, true).dump(1) + "\n");
        if (as_json || for_verify) {
            print_json(suite_json(config, result, false));
        } else {
            std::printf("%-24s %-6s %-8s %-22s %s\n", "check", "gating", "result", "worst", "runtime");
            for (const auto& r : result.reports) {
                std::printf("%-24s %-6s %-8s %-22.10g %.2fs%s%s\n", r.theorem_id.c_str(), r.gating ? "yes" : "no",
                            r.error.empty() ? (r.passed ? "PASS" : "FAIL") : "ERROR", r.worst_case_slack,
                            r.runtime_seconds, r.error.empty() ? "" : "  ", r.error.c_str());
            }
            std::printf("config %s: %s\n", config.hash().c_str(), result.exit_code == 0 ? "all gating checks pass" : "violations found");
        }
        return result.exit_code;
    };

    try {
        if (*spaces_cmd) {
            json out = json::array();
            if (!space_token.empty()) {
                out.push_back(space_json(SolitonSpace::parse(space_token)));
            } else {
                for (SpaceKind kind : {SpaceKind::gaussian, SpaceKind::sphere, SpaceKind::cylinder}) {
                    for (int n = 1; n <= 5; ++n) {
                        try {
                            out.push_back(space_json(SolitonSpace::make(kind, n)));
                        } catch (const Error&) {
                        }
                    }
                }
            }
            print_json(out);
            return 0;
        }
        if (*mu_cmd) {
            const SolitonSpace s = SolitonSpace::parse(space_token);
            const EntropyReport r = mu(s);
            print_json({{"space", s.descriptor()},
                        {"mu", r.mu},
                        {"method", std::string(to_string(r.method))},
                        {"quadrature_mu", r.quadrature_mu},
                        {"quadrature_error", r.quadrature_error},
                        {"normalization_check", r.normalization_check},
                        {"minimizer_defect", minimizer_check(s)}});
            return 0;
        }
        if (*spectrum_cmd) {
            const SolitonSpace s = SolitonSpace::parse(space_token);
            const double coupling = a.value_or(0.25);
            std::printf("index,eigenvalue,multiplicity,source\n");
            if (s.kind() == SpaceKind::sphere) {
                const Spectrum sp = sphere_spectrum(s.dimension(), coupling, l_max);
                for (const auto& level : sp.levels()) {
                    std::printf("%d,%.17g,%ld,%s\n", level.degree, level.value, level.multiplicity,
                                std::string(to_string(sp.source())).c_str());
                }
            } else if (s.kind() == SpaceKind::gaussian) {
                const Spectrum sp = eigen_solve(discretize_radial(s, r_max, grid_m, coupling), k_count);
                int index = 1;
                for (const auto& level : sp.levels()) {
                    std::printf("%d,%.17g,%ld,%s\n", index++, level.value, level.multiplicity,
                                std::string(to_string(sp.source())).c_str());
                }
            } else {
                throw Error(ErrorCode::kind_mismatch, "the cylinder spectrum is continuous; use sphere:N or gaussian:N");
            }
            return 0;
        }
        if (*kernel_cmd) {
            const SolitonSpace s = SolitonSpace::parse(space_token);
            const KernelMethod method = method_name.empty() ? KernelMethod::closed_form : parse_kernel_method(method_name);
            const HeatKernel k(s, a.value_or(0.25), method);
            const KernelValue v = k.evaluate(make_point(s, x_coords), make_point(s, y_coords), t);
            print_json({{"space", s.descriptor()},
                        {"a", k.coupling()},
                        {"t", t},
                        {"method", std::string(to_string(method))},
                        {"value", v.value},
                        {"log_value", v.log_value},
                        {"error_estimate", v.error}});
            return 0;
        }
        if (*green_cmd) {
            const SolitonSpace s = SolitonSpace::parse(space_token);
            const GreenFunction g(s, a.value_or(0.25));
            const Point x = make_point(s, x_coords);
            const Point y = make_point(s, y_coords);
            const GreenValue v = g.evaluate(x, y);
            print_json({{"space", s.descriptor()},
                        {"a", g.coupling()},
                        {"distance", s.distance(x, y)},
                        {"value", v.value},
                        {"error_estimate", v.error}});
            return 0;
        }
        if (*verify_cmd) return run(true);
        if (*suite_cmd) return run(false);
        if (*plot_cmd) {
            if (csv_dir.empty()) throw UsageError("plot-data needs --csv DIR");
            std::ifstream in(report_path);
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw UsageError(std::string("cannot parse report: ") + e.what());
            }
            emit_plot_data(doc, csv_dir);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::io_error ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
