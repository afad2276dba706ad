#pragma once

#include <stdexcept>
#include <string>

namespace uiobank {

// Failure categories used across the library. The CLI maps these onto its
// stable exit codes, so the set is part of the public contract.
enum class ErrorCode {
    invalid_input,
    design_infeasible,
    no_convergence,
    internal_inconsistency,
    not_ready,
    unstabilizable_configuration,
    diverged,
    validation,
    io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace uiobank
