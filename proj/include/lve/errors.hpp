#pragma once

#include <stdexcept>
#include <string>

namespace lve {

/// Precondition or contract broken by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Enumeration or expansion requested beyond a configured cap.
struct SizeLimitError : std::length_error {
  using std::length_error::length_error;
};

/// A numerical procedure did not reach the requested tolerance.
struct AccuracyError : std::runtime_error {
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

/// Coupling outside the analyticity domain of the model.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Singular Padé system; the caller should reduce the denominator degree.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Padé continuation has a pole on the integration path.
struct ContinuationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix G is not invertible at the given field assignment.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested model degree has no built-in construction.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tree sum truncated below what the requested order needs.
struct IncompletenessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lve
