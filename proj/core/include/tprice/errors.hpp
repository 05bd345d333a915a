#pragma once

#include <stdexcept>
#include <string>

namespace tprice {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory {
  kConfig,      // malformed input, unknown keys, drifted scenario
  kConstraint,  // not achievable, certification failure
  kNumerical,   // bracket, window, domain and sensitivity failures
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ErrorCategory category() const noexcept = 0;
  /// Short machine-readable class name, e.g. "empty_price_window".
  virtual const char* kind() const noexcept = 0;
};

#define TPRICE_DECLARE_ERROR(Name, Kind, Category)                     \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    ErrorCategory category() const noexcept override { return Category; } \
    const char* kind() const noexcept override { return Kind; }        \
  };

TPRICE_DECLARE_ERROR(DomainError, "out_of_domain", ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(BracketError, "bracket", ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(UnboundedFeasibleSetError, "unbounded_feasible_set",
                     ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(NoInteriorMaximizerError, "no_interior_maximizer",
                     ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(DegenerateSensitivityError, "degenerate_sensitivity",
                     ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(EmptyPriceWindowError, "empty_price_window",
                     ErrorCategory::kNumerical)
TPRICE_DECLARE_ERROR(NotAchievableError, "not_achievable",
                     ErrorCategory::kConstraint)
TPRICE_DECLARE_ERROR(CertificationError, "certification",
                     ErrorCategory::kConstraint)

#undef TPRICE_DECLARE_ERROR

/// Configuration problem tied to a location in the input document.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  ErrorCategory category() const noexcept override {
    return ErrorCategory::kConfig;
  }
  const char* kind() const noexcept override { return "config"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace tprice
