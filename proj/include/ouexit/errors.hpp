#pragma once

#include <stdexcept>
#include <string>

namespace ouexit {

// Bad parameters or arguments outside a function's domain. Also used by the
// model JSON loader, with the offending field named in the message.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature did not reach the requested tolerance at max_levels. Carries the
// partial value and its error estimate so the caller can accept with a warning.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& msg, double value, double error_estimate)
      : std::runtime_error(msg), value(value), error_estimate(error_estimate) {}
  double value;
  double error_estimate;
};

// An improper integral grew without bound (boundary-limit quadrature).
class Divergent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A formula was requested outside the hypotheses it is valid under.
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Censored exit samples were fed to an estimator that cannot use them.
class CensoredDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few samples for a statistical test to be meaningful.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulation mode incompatible with the model (e.g. exact jump mode with a
// diffusion component).
class ModeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ouexit
