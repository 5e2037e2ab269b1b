#include "solitonlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "solitonlab/error.hpp"
#include "solitonlab/spaces.hpp"

namespace solitonlab {

namespace {

struct Value {
    std::string text;
    bool quoted = false;
    bool list = false;
    std::vector<std::string> items;
};

[[noreturn]] void fail(int line, const std::string& message) {
    throw Error(ErrorCode::config_error, "line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

Value parse_value(std::string_view raw, int line) {
    Value v;
    raw = trim(raw);
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        v.text = std::string(raw.substr(1, raw.size() - 2));
        if (v.text.find('"') != std::string::npos) fail(line, "stray quote in string");
        v.quoted = true;
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated list");
        v.list = true;
        std::string_view body = trim(raw.substr(1, raw.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const std::string_view item = trim(body.substr(0, comma));
            if (item.empty()) fail(line, "empty list item");
            v.items.emplace_back(item);
            if (comma == std::string_view::npos) break;
            body = body.substr(comma + 1);
            if (trim(body).empty()) fail(line, "trailing comma in list");
        }
        return v;
    }
    if (raw.find_first_of(" \t\"[]=") != std::string_view::npos) fail(line, "malformed value '" + std::string(raw) + "'");
    v.text = std::string(raw);
    return v;
}

double to_double(const std::string& s, int line) {
    double out = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) fail(line, "expected a number, got '" + s + "'");
    return out;
}

long long to_integer(const std::string& s, int line) {
    long long out = 0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || ptr != end) fail(line, "expected an integer, got '" + s + "'");
    return out;
}

const Value& scalar(const Value& v, int line) {
    if (v.list) fail(line, "expected a scalar, got a list");
    return v;
}

double number(const Value& v, int line) {
    if (scalar(v, line).quoted) fail(line, "expected a number, got a string");
    return to_double(v.text, line);
}

int integer(const Value& v, int line, long long lo, long long hi) {
    if (scalar(v, line).quoted) fail(line, "expected an integer, got a string");
    const long long x = to_integer(v.text, line);
    if (x < lo || x > hi) {
        fail(line, "value " + v.text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
}

bool boolean(const Value& v, int line) {
    scalar(v, line);
    if (v.text == "true") return true;
    if (v.text == "false") return false;
    fail(line, "expected true or false, got '" + v.text + "'");
}

std::vector<double> numbers(const Value& v, int line) {
    if (!v.list) fail(line, "expected a list such as [1, 2]");
    if (v.items.empty()) fail(line, "list must not be empty");
    std::vector<double> out;
    for (const std::string& item : v.items) out.push_back(to_double(item, line));
    return out;
}

double positive(double x, int line) {
    if (!(x > 0.0)) fail(line, "value must be positive");
    return x;
}

using Setter = std::function<void(ExperimentConfig&, const Value&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["space"] = [](ExperimentConfig& c, const Value& v, int line) {
            try {
                (void)SolitonSpace::parse(scalar(v, line).text);
            } catch (const Error& e) {
                fail(line, e.what());
            }
            c.space = v.text;
        };
        t["a"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.a = number(v, line);
            if (c.a < 0.0) fail(line, "a must be >= 0");
        };
        t["seed"] = [](ExperimentConfig& c, const Value& v, int line) {
            const std::string& s = scalar(v, line).text;
            std::uint64_t out = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (v.quoted || ec != std::errc() || ptr != s.data() + s.size()) fail(line, "seed must be an unsigned integer");
            c.seed = out;
        };
        t["theorem"] = [](ExperimentConfig& c, const Value& v, int line) {
            if (!is_theorem_id(scalar(v, line).text)) fail(line, "unknown theorem '" + v.text + "'");
            c.theorem = v.text;
        };
        t["kernel.method"] = [](ExperimentConfig& c, const Value& v, int line) {
            try {
                c.method = parse_kernel_method(scalar(v, line).text);
            } catch (const Error& e) {
                fail(line, e.what());
            }
        };
        t["kernel.epsilon"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.epsilon = positive(number(v, line), line);
            if (c.kernel.epsilon > 1e-6) fail(line, "epsilon must be <= 1e-6");
        };
        t["kernel.t_min"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.t_min = positive(number(v, line), line);
        };
        t["kernel.l_max"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.l_max = integer(v, line, 1, 1000000);
        };
        t["kernel.r_max"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.r_max = positive(number(v, line), line);
        };
        t["kernel.m"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.m = integer(v, line, 32, 1 << 22);
            if (c.kernel.m % 4 != 0) fail(line, "m must be a multiple of 4");
        };
        t["kernel.dt_ratio"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.dt_ratio = positive(number(v, line), line);
            if (c.kernel.dt_ratio > 0.1) fail(line, "dt_ratio must be <= 0.1");
        };
        t["kernel.dt_max"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.dt_max = positive(number(v, line), line);
        };
        t["kernel.t0"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.kernel.t0 = positive(number(v, line), line);
        };
        const auto count = [](int GridSpec::*field, int lo) {
            return [field, lo](ExperimentConfig& c, const Value& v, int line) {
                c.grid.*field = integer(v, line, lo, 100000);
            };
        };
        const auto real = [](double GridSpec::*field) {
            return [field](ExperimentConfig& c, const Value& v, int line) {
                c.grid.*field = positive(number(v, line), line);
            };
        };
        t["grid.pairs"] = count(&GridSpec::pairs, 2);
        t["grid.times"] = count(&GridSpec::times, 2);
        t["grid.t_lo"] = real(&GridSpec::t_lo);
        t["grid.t_hi"] = real(&GridSpec::t_hi);
        t["grid.c"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.grid.c = numbers(v, line);
            for (double x : c.grid.c) positive(x, line);
        };
        t["grid.taus"] = count(&GridSpec::taus, 1);
        t["grid.tau_lo"] = real(&GridSpec::tau_lo);
        t["grid.tau_hi"] = real(&GridSpec::tau_hi);
        t["grid.log_sobolev_trials"] = count(&GridSpec::log_sobolev_trials, 1);
        t["grid.sobolev_trials"] = count(&GridSpec::sobolev_trials, 1);
        t["grid.axiom_samples"] = count(&GridSpec::axiom_samples, 1);
        t["grid.k_max"] = count(&GridSpec::k_max, 1);
        t["grid.D"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.grid.D = number(v, line);
            if (!(c.grid.D > 2.0)) fail(line, "D must exceed 2");
        };
        t["grid.gamma"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.grid.gamma = number(v, line);
            if (!(c.grid.gamma > 1.0)) fail(line, "gamma must exceed 1");
        };
        t["grid.tail_radii"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.grid.tail_radii = numbers(v, line);
            for (double x : c.grid.tail_radii) positive(x, line);
        };
        t["grid.probe_times"] = count(&GridSpec::probe_times, 1);
        t["grid.probe_t_lo"] = real(&GridSpec::probe_t_lo);
        t["grid.probe_t_hi"] = real(&GridSpec::probe_t_hi);
        t["grid.energy_trials"] = count(&GridSpec::energy_trials, 1);
        t["grid.energy_r_max"] = real(&GridSpec::energy_r_max);
        t["grid.energy_m"] = count(&GridSpec::energy_m, 32);
        t["verify.tol_analytic"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.tolerances.analytic = positive(number(v, line), line);
        };
        t["verify.tol_fd"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.tolerances.fd = positive(number(v, line), line);
        };
        t["verify.tol_refinement"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.tolerances.refinement = positive(number(v, line), line);
        };
        t["verify.exploratory"] = [](ExperimentConfig& c, const Value& v, int line) {
            c.exploratory = boolean(v, line);
        };
        t["output.json"] = [](ExperimentConfig& c, const Value& v, int line) { c.json_path = scalar(v, line).text; };
        t["output.csv_dir"] = [](ExperimentConfig& c, const Value& v, int line) { c.csv_dir = scalar(v, line).text; };
        return t;
    }();
    return table;
}

const std::set<std::string> kSections = {"kernel", "grid", "verify", "output"};

}  // namespace

const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids = {
        "kernel-axioms", "ultracontractivity", "gaussian-bound",      "cr-bound",
        "green-bound",   "eigenvalue-bound",   "log-sobolev",         "sobolev",
        "energy-monotonicity", "weighted-energy", "grigoryan-constants"};
    return ids;
}

bool is_theorem_id(std::string_view id) {
    for (const auto& t : theorem_ids()) {
        if (t == id) return true;
    }
    return false;
}

bool requires_quarter_coupling(std::string_view id) {
    return id == "ultracontractivity" || id == "gaussian-bound" || id == "green-bound" ||
           id == "eigenvalue-bound" || id == "sobolev" || id == "weighted-energy";
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(section)) fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) fail(line_no, "missing key");
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end()) fail(line_no, "unknown key '" + full + "'");
        if (!seen.insert(full).second) fail(line_no, "duplicate key '" + full + "'");
        it->second(config, parse_value(line.substr(eq + 1), line_no), line_no);
    }
    const auto order = [&](double lo, double hi, const char* what) {
        if (!(hi >= lo)) throw Error(ErrorCode::config_error, std::string(what) + ": upper end below lower end");
    };
    order(config.grid.t_lo, config.grid.t_hi, "grid.t_lo/t_hi");
    order(config.grid.tau_lo, config.grid.tau_hi, "grid.tau_lo/tau_hi");
    order(config.grid.probe_t_lo, config.grid.probe_t_hi, "grid.probe_t_lo/probe_t_hi");
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot read config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(const ExperimentConfig& config) {
    if (config.space.empty()) throw Error(ErrorCode::config_error, "no space given (key 'space' or --space)");
    const SolitonSpace space = [&] {
        try {
            return SolitonSpace::parse(config.space);
        } catch (const Error& e) {
            throw Error(ErrorCode::config_error, e.what());
        }
    }();
    (void)space;
    if (!(config.a >= 0.0) || !std::isfinite(config.a)) throw Error(ErrorCode::config_error, "a must be >= 0");
    const bool bound_runs = config.theorem.empty() || config.theorem == "gaussian-bound";
    if (bound_runs) {
        for (double c : config.grid.c) {
            if (!(c > 4.0)) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "c = %g: the Gaussian bound needs c > 4", c);
                throw Error(ErrorCode::config_error, buf);
            }
        }
    }
    if (!config.theorem.empty() && requires_quarter_coupling(config.theorem) && config.a < 0.25 &&
        !config.exploratory) {
        throw Error(ErrorCode::config_error, config.theorem +
                                                 " assumes a >= 1/4; set [verify] exploratory = true to run it anyway");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"space", space},
            {"a", a},
            {"seed", seed},
            {"theorem", theorem},
            {"kernel",
             {{"method", std::string(to_string(method))},
              {"epsilon", kernel.epsilon},
              {"t_min", kernel.t_min},
              {"l_max", kernel.l_max},
              {"r_max", kernel.r_max},
              {"m", kernel.m},
              {"dt_ratio", kernel.dt_ratio},
              {"dt_max", kernel.dt_max},
              {"t0", kernel.t0}}},
            {"grid", grid.to_json()},
            {"verify",
             {{"tol_analytic", tolerances.analytic},
              {"tol_fd", tolerances.fd},
              {"tol_refinement", tolerances.refinement},
              {"exploratory", exploratory}}}};
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : to_json().dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace solitonlab
