#pragma once

#include <stdexcept>
#include <string>

namespace oscsum {

// Base class for everything thrown by the library. The CLI maps
// ConfigError to exit code 2 and any other Error to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// An exact resonance omega.nu == 0 for nu != 0, or a propagator hit it.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

// A dressed or renormalized propagator denominator collapsed.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A support-radius budget would have to discard non-negligible mass,
// or a tree enumeration exceeded its tree-count budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& msg, long long count = -1)
      : Error(msg), count_so_far(count) {}
  long long count_so_far;
};

// Violated operation precondition (bad argument, out-of-domain input).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical domain problems: divergence, tail not damped, Newton failure.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Near-singular linear solve in the Pade construction.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// Trajectory escape during time integration; carries the escape time.
class EscapeError : public Error {
 public:
  EscapeError(const std::string& msg, double t) : Error(msg), time(t) {}
  double time;
};

// Configuration file problems; messages carry line information.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oscsum
