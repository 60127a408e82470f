#pragma once

#include <stdexcept>
#include <string>

namespace cs3 {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotClosed : Error {
  explicit NotClosed(const std::string& msg) : Error(msg) {}
};

struct DependentBasis : Error {
  explicit DependentBasis(const std::string& msg) : Error(msg) {}
};

struct DegenerateRestriction : Error {
  explicit DegenerateRestriction(const std::string& msg) : Error(msg) {}
};

struct AlgebraMismatch : Error {
  explicit AlgebraMismatch(const std::string& msg) : Error(msg) {}
};

struct DegreeOverflow : Error {
  explicit DegreeOverflow(const std::string& msg) : Error(msg) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

struct NotInGroup : Error {
  explicit NotInGroup(const std::string& msg) : Error(msg) {}
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

struct NonConvergent : Error {
  explicit NonConvergent(const std::string& msg) : Error(msg) {}
};

struct NotInvariant : Error {
  explicit NotInvariant(const std::string& msg) : Error(msg) {}
};

struct EvaluationError : Error {
  explicit EvaluationError(const std::string& msg) : Error(msg) {}
};

struct UnknownExample : Error {
  explicit UnknownExample(const std::string& msg) : Error(msg) {}
};

}  // namespace cs3
