#include "uiobank/errors.hpp"

namespace uiobank {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::design_infeasible: return "design-infeasible";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::internal_inconsistency: return "internal-inconsistency";
    case ErrorCode::not_ready: return "not-ready";
    case ErrorCode::unstabilizable_configuration: return "unstabilizable-configuration";
    case ErrorCode::diverged: return "diverged";
    case ErrorCode::validation: return "validation";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

} // namespace uiobank
