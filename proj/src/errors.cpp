#include "crackline/errors.hpp"

namespace crackline {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_material: return "invalid_material";
    case ErrorCode::invalid_interface: return "invalid_interface";
    case ErrorCode::unbalanced_loading: return "unbalanced_loading";
    case ErrorCode::inadmissible_bimaterial: return "inadmissible_bimaterial";
    case ErrorCode::unsupported_regime: return "unsupported_regime";
    case ErrorCode::degenerate_roots: return "degenerate_roots";
    case ErrorCode::invalid_grid: return "invalid_grid";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::singular_system: return "singular_system";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace crackline
