#pragma once

#include <stdexcept>
#include <string>

namespace auditgame {

/// Malformed or out-of-contract input (bad label, dimension mismatch, invalid config).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation called outside the parameter region it is defined for.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

/// The requested construction does not apply to the budget regime of the config.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No signaling equilibrium is guaranteed (two users, budget strictly between 0
/// and the two-type threshold). Carries the thresholds that were violated.
class NonexistenceError : public RegimeError {
 public:
  NonexistenceError(const std::string& what, double budget, double threshold_two_type,
                    double threshold_general)
      : RegimeError(what),
        budget_(budget),
        threshold_two_type_(threshold_two_type),
        threshold_general_(threshold_general) {}

  double budget() const { return budget_; }
  double threshold_two_type() const { return threshold_two_type_; }
  double threshold_general() const { return threshold_general_; }

 private:
  double budget_;
  double threshold_two_type_;
  double threshold_general_;
};

/// A result that the theory guarantees did not materialize (e.g. the no-audit LP
/// came back infeasible). Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace auditgame
