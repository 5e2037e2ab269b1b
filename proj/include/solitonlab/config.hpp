#pragma once

// Experiment configuration: a line-oriented `key = value` file with
// [section] headers. See README.md for the full key list.
//
//   space = "sphere:2"
//   a = 0.25
//   seed = 7
//   [grid]
//   c = [4.5, 5, 8]
//
// Values are numbers, booleans, quoted or bare strings, and bracketed
// comma-separated lists. '#' starts a comment outside quotes.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solitonlab/kernels.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

struct ExperimentConfig {
    std::string space;     // catalogue token, e.g. "gaussian:3"
    double a = 0.25;
    std::uint64_t seed = 0;
    std::string theorem;   // empty: the whole suite
    KernelMethod method = KernelMethod::closed_form;
    KernelParams kernel;
    GridSpec grid;
    Tolerances tolerances;
    bool exploratory = false;  // allow a < 1/4 for theorems that assume a >= 1/4
    std::string json_path;
    std::string csv_dir;

    /// Effective configuration without the [output] section.
    nlohmann::json to_json() const;
    /// FNV-1a of to_json().dump(), as 16 hex digits.
    std::string hash() const;
};

/// Parses and range-checks every key; errors carry the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks that depend on the selected theorem: space present,
/// c > 4 when the Gaussian bound runs, a >= 1/4 unless exploratory.
void validate(const ExperimentConfig& config);

const std::vector<std::string>& theorem_ids();
bool is_theorem_id(std::string_view id);
/// Theorems whose hypotheses include a >= 1/4.
bool requires_quarter_coupling(std::string_view id);

}  // namespace solitonlab
