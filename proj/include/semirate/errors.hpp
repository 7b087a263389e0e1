#pragma once

#include <stdexcept>
#include <string>

namespace semirate {

// Exit-code classes used by the CLI: config errors map to 2, certified
// inequality violations to 1, numerical failures to 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : NumericalError {
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

struct UnboundedFunctionError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnsupportedKindError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ZeroEigenvalueError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DefectiveMatrixError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnboundedSemigroupError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateSweepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a measured quantity crosses a certified bound. The witness
// is a JSON document sufficient to replay the failing point.
struct BoundViolationError : std::runtime_error {
  BoundViolationError(const std::string& what, std::string witness_json)
      : std::runtime_error(what), witness(std::move(witness_json)) {}
  std::string witness;
};

}  // namespace semirate
