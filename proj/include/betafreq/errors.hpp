#pragma once

#include <stdexcept>
#include <string>

namespace betafreq {

// Exit-code categories used by the CLI: 2 validation, 3 precision, 4 infeasible.
enum class ErrorCategory { Validation = 2, Precision = 3, Infeasible = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct NoSignChange : Error {
  explicit NoSignChange(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct MultipleSignChanges : Error {
  explicit MultipleSignChanges(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct NotInSimplex : Error {
  explicit NotInSimplex(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct InclusionViolated : Error {
  explicit InclusionViolated(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct HypothesisViolated : Error {
  explicit HypothesisViolated(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct Diverged : Error {
  explicit Diverged(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

struct PrecisionBudgetExceeded : Error {
  explicit PrecisionBudgetExceeded(const std::string& msg)
      : Error(ErrorCategory::Precision, msg) {}
};

struct NotReachableWithinCutoff : Error {
  explicit NotReachableWithinCutoff(const std::string& msg)
      : Error(ErrorCategory::Infeasible, msg) {}
};

struct InfeasibleTargets : Error {
  explicit InfeasibleTargets(const std::string& msg)
      : Error(ErrorCategory::Infeasible, msg) {}
};

}  // namespace betafreq
