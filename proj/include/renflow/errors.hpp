#pragma once

#include <stdexcept>
#include <string>

namespace renflow {

// Bad inputs: out-of-range parameters, malformed specs, dimension mismatches.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation left its domain of validity: grid overflow, branch ambiguity,
// a fractional convolution root that is not a density, underflow, ...
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidPotentialError : NumericalError {
  explicit InvalidPotentialError(const std::string& msg) : NumericalError(msg) {}
};
struct DegeneratePotentialError : NumericalError {
  explicit DegeneratePotentialError(const std::string& msg) : NumericalError(msg) {}
};
struct OrderTooHighError : ConfigError {
  explicit OrderTooHighError(const std::string& msg) : ConfigError(msg) {}
};
struct GridOverflowError : NumericalError {
  explicit GridOverflowError(const std::string& msg) : NumericalError(msg) {}
};
struct NotInfinitelyDivisibleError : NumericalError {
  explicit NotInfinitelyDivisibleError(const std::string& msg) : NumericalError(msg) {}
};
struct BranchError : NumericalError {
  explicit BranchError(const std::string& msg) : NumericalError(msg) {}
};
struct UnderflowError : NumericalError {
  explicit UnderflowError(const std::string& msg) : NumericalError(msg) {}
};
struct OutOfCutoffError : ConfigError {
  explicit OutOfCutoffError(const std::string& msg) : ConfigError(msg) {}
};
struct UnsupportedRepresentationError : ConfigError {
  explicit UnsupportedRepresentationError(const std::string& msg) : ConfigError(msg) {}
};
struct MustTruncateError : ConfigError {
  explicit MustTruncateError(const std::string& msg) : ConfigError(msg) {}
};
struct InvalidKernelError : ConfigError {
  explicit InvalidKernelError(const std::string& msg) : ConfigError(msg) {}
};
struct InvalidIncrementError : ConfigError {
  explicit InvalidIncrementError(const std::string& msg) : ConfigError(msg) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace renflow
