#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "solitonlab/config.hpp"
#include "solitonlab/error.hpp"
#include "solitonlab/runner.hpp"

using namespace solitonlab;
namespace fs = std::filesystem;

namespace {

std::string config_error(std::string_view text) {
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config_error);
        return e.what();
    }
    return {};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("solitonlab_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes the defaults") {
    const ExperimentConfig c = parse_config("space = \"sphere:2\"\n");
    CHECK(c.space == "sphere:2");
    CHECK(c.a == 0.25);
    CHECK(c.seed == 0);
    CHECK(c.theorem.empty());
    CHECK(c.method == KernelMethod::closed_form);
    CHECK(c.grid.pairs == 24);
    CHECK(c.grid.times == 40);
    CHECK(c.grid.c == std::vector<double>{4.5, 5.0, 8.0, 16.0});
    CHECK(c.tolerances.analytic == 1e-6);
    CHECK(c.tolerances.fd == 1e-3);
    CHECK(c.tolerances.refinement == 0.05);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("every section parses") {
    const ExperimentConfig c = parse_config(R"(# full example
space = gaussian:3
a = 0.5
seed = 42
theorem = "ultracontractivity"
[kernel]
method = "fd_dirichlet"
epsilon = 1e-14
t_min = 2e-3
l_max = 500
r_max = 30
m = 2048
dt_ratio = 1e-3
dt_max = 0.01
t0 = 2e-3
[grid]
pairs = 12
times = 20
c = [4.5, 6]   # trailing comment
D = 12
gamma = 3
tail_radii = [1, 3]
[verify]
tol_analytic = 1e-7
tol_fd = 2e-3
tol_refinement = 0.1
exploratory = true
[output]
json = "out.json"
csv_dir = "csv"
)");
    CHECK(c.space == "gaussian:3");
    CHECK(c.a == 0.5);
    CHECK(c.seed == 42);
    CHECK(c.theorem == "ultracontractivity");
    CHECK(c.method == KernelMethod::fd_dirichlet);
    CHECK(c.kernel.epsilon == 1e-14);
    CHECK(c.kernel.l_max == 500);
    CHECK(c.kernel.m == 2048);
    CHECK(c.kernel.t0 == 2e-3);
    CHECK(c.grid.pairs == 12);
    CHECK(c.grid.c == std::vector<double>{4.5, 6.0});
    CHECK(c.grid.D == 12.0);
    CHECK(c.grid.gamma == 3.0);
    CHECK(c.grid.tail_radii == std::vector<double>{1.0, 3.0});
    CHECK(c.tolerances.analytic == 1e-7);
    CHECK(c.tolerances.refinement == 0.1);
    CHECK(c.exploratory);
    CHECK(c.json_path == "out.json");
    CHECK(c.csv_dir == "csv");
}

TEST_CASE("malformed input carries a line number") {
    CHECK(config_error("space = \"sphere:2\"\nbogus = 1\n").find("line 2") != std::string::npos);
    CHECK(config_error("space = \"sphere:2\"\na = 1\na = 2\n").find("line 3") != std::string::npos);
    CHECK(config_error("space = \"sphere:2\n").find("line 1") != std::string::npos);
    CHECK(config_error("[grid]\nc = [4.5, \n").find("line 2") != std::string::npos);
    CHECK(config_error("[nope]\n").find("line 1") != std::string::npos);
    CHECK(config_error("space\n").find("line 1") != std::string::npos);
    CHECK(config_error("a = -1\n").find("line 1") != std::string::npos);
    CHECK(config_error("[kernel]\nm = 1022\n").find("line 2") != std::string::npos);
    CHECK(config_error("theorem = \"riemann\"\n").find("line 1") != std::string::npos);
    CHECK(config_error("space = \"cylinder:2\"\n").find("line 1") != std::string::npos);
    CHECK(config_error("seed = -3\n").find("line 1") != std::string::npos);
}

TEST_CASE("cross-field validation") {
    ExperimentConfig c = parse_config("space = \"gaussian:3\"\na = 0.1\ntheorem = \"gaussian-bound\"\n");
    CHECK_THROWS_AS(validate(c), Error);
    c.exploratory = true;
    CHECK_NOTHROW(validate(c));

    ExperimentConfig d = parse_config("space = \"gaussian:3\"\ntheorem = \"gaussian-bound\"\n[grid]\nc = [4, 5]\n");
    CHECK_THROWS_AS(validate(d), Error);

    CHECK_THROWS_AS(validate(parse_config("a = 0.25\n")), Error);
}

TEST_CASE("hash is stable and sensitive") {
    const auto a = parse_config("space = \"sphere:2\"\n");
    const auto b = parse_config("# comment\nspace = sphere:2\n[output]\njson = \"x.json\"\n");
    const auto c = parse_config("space = \"sphere:2\"\nseed = 1\n");
    CHECK(a.hash().size() == 16);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
}

TEST_CASE("theorem ids") {
    for (const char* id : {"kernel-axioms", "ultracontractivity", "gaussian-bound", "cr-bound", "green-bound",
                           "eigenvalue-bound", "log-sobolev", "sobolev", "energy-monotonicity",
                           "weighted-energy", "grigoryan-constants"}) {
        CHECK(is_theorem_id(id));
    }
    CHECK_FALSE(is_theorem_id("nope"));
    CHECK(requires_quarter_coupling("gaussian-bound"));
}

}

TEST_SUITE("runner") {

TEST_CASE("suite composition per space") {
    const auto g3 = suite_checks(SolitonSpace::parse("gaussian:3"));
    CHECK(g3.front() == "kernel-axioms");
    CHECK(std::find(g3.begin(), g3.end(), "kernel-axioms[fd]") != g3.end());
    CHECK(std::find(g3.begin(), g3.end(), "weighted-energy") != g3.end());
    const auto s2 = suite_checks(SolitonSpace::parse("sphere:2"));
    CHECK(std::find(s2.begin(), s2.end(), "eigenvalue-bound") != s2.end());
    CHECK(std::find(s2.begin(), s2.end(), "green-bound") == s2.end());
    CHECK(std::find(s2.begin(), s2.end(), "sobolev") == s2.end());
    const auto c3 = suite_checks(SolitonSpace::parse("cylinder:3"));
    CHECK(std::find(c3.begin(), c3.end(), "green-bound") != c3.end());
    CHECK(std::find(c3.begin(), c3.end(), "eigenvalue-bound") == c3.end());
}

TEST_CASE("a failing check becomes a failed report, not an exception") {
    ExperimentConfig c = parse_config("space = \"sphere:2\"\n");
    c.grid.pairs = 5;
    c.grid.times = 6;
    const SuiteResult ok = run_suite(c, {"grigoryan-constants", "ultracontractivity"});
    CHECK(ok.exit_code == 0);
    REQUIRE(ok.reports.size() == 2);
    CHECK(ok.reports[0].theorem_id == "grigoryan-constants");
    CHECK(ok.reports[1].theorem_id == "ultracontractivity");

    // S^4 has no image formula, and the series refuses t < t_min.
    ExperimentConfig s4 = parse_config("space = \"sphere:4\"\n[kernel]\nt_min = 0.5\n");
    s4.grid = c.grid;
    const SuiteResult bad = run_suite(s4, {"ultracontractivity"});
    CHECK(bad.exit_code == 1);
    CHECK_FALSE(bad.reports[0].passed);
    CHECK_FALSE(bad.reports[0].error.empty());
}

TEST_CASE("CSV output: header, row count and determinism") {
    ExperimentConfig c = parse_config("space = \"gaussian:3\"\n");
    SuiteResult first = run_suite(c, {"ultracontractivity"});
    SuiteResult second = run_suite(c, {"ultracontractivity"});
    const fs::path d1 = scratch_dir("csv1"), d2 = scratch_dir("csv2");
    write_csv(first.reports[0], d1.string());
    write_csv(second.reports[0], d2.string());
    const std::string name = csv_file_name("ultracontractivity");
    const std::string text = read_file(d1 / name);
    CHECK(text == read_file(d2 / name));
    CHECK(text.rfind("theorem_id,space,a,x_id,y_id,t,lhs,rhs,slack\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 24 * 40);

    VerificationReport empty;
    empty.theorem_id = "ultracontractivity";
    empty.space = "gaussian:3";
    const fs::path d3 = scratch_dir("csv3");
    write_csv(empty, d3.string());
    CHECK(read_file(d3 / name) == "theorem_id,space,a,x_id,y_id,t,lhs,rhs,slack\n");

    // plot-data from the JSON document reproduces the same file.
    const fs::path d4 = scratch_dir("csv4");
    emit_plot_data(suite_json(c, first, true), d4.string());
    CHECK(read_file(d4 / name) == text);
    for (const auto& d : {d1, d2, d3, d4}) fs::remove_all(d);
}

TEST_CASE("report JSON echoes the config") {
    ExperimentConfig c = parse_config("space = \"sphere:2\"\nseed = 9\n");
    const SuiteResult r = run_suite(c, {"grigoryan-constants"});
    const nlohmann::json doc = suite_json(c, r, false);
    CHECK(doc.contains("version"));
    CHECK(doc.dump().find(c.hash()) != std::string::npos);
    CHECK(doc.dump().find("grigoryan-constants") != std::string::npos);
}

}
