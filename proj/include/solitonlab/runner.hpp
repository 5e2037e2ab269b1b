#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solitonlab/config.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

/// Check ids the suite runs on a space. "kernel-axioms[fd]" is the Dirichlet
/// FD variant of kernel-axioms on gaussian:n.
std::vector<std::string> suite_checks(const SolitonSpace& space);

/// Runs one check. Errors raised by the check propagate.
VerificationReport run_check(const ExperimentConfig& config, std::string_view check_id);

struct SuiteResult {
    std::vector<VerificationReport> reports;  // in suite_checks order
    int exit_code = 0;                        // 0 all gating checks pass, 1 otherwise
};

/// Runs the checks concurrently (see thread_count); a check that throws
/// becomes a failed report carrying the error message.
SuiteResult run_suite(const ExperimentConfig& config, const std::vector<std::string>& checks);
SuiteResult run_suite(const ExperimentConfig& config);

/// SOLITONLAB_THREADS, 0 or unset meaning hardware concurrency.
unsigned thread_count();

/// Report document: version, config echo and hash, per-check reports.
nlohmann::json suite_json(const ExperimentConfig& config, const SuiteResult& result, bool with_rows);

/// One CSV per report: theorem_id, space, a, x_id, y_id, t, lhs, rhs, slack.
void write_csv(const VerificationReport& report, const std::string& dir);
/// Writes the CSVs of a report document produced by suite_json(..., true).
void emit_plot_data(const nlohmann::json& document, const std::string& dir);
std::string csv_file_name(std::string_view theorem_id);

}  // namespace solitonlab
