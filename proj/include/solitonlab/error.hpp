#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

enum class ErrorCode {
    dimension_out_of_range,
    kind_mismatch,
    invalid_argument,
    convergence_failure,
    under_resolved,
    divergence,
    normalization_failure,
    hypothesis_failure,
    config_error,
    io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace solitonlab
