#pragma once

#include <stdexcept>
#include <string>

namespace crackline {

// Error classes surfaced to callers. The CLI maps each class to its own exit code.
enum class ErrorCode {
  invalid_material,
  invalid_interface,
  unbalanced_loading,
  inadmissible_bimaterial,
  unsupported_regime,
  degenerate_roots,
  invalid_grid,
  domain_error,
  singular_system,
  non_convergence,
  config_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace crackline
