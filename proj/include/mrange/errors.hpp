#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mrange {

// Rejected input: bad file contents, violated type invariants, bad flags.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model evaluated outside its mathematical domain (e.g. efficiency at standstill).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested per-cell power exceeds what the OTC circuit can deliver.
class InfeasiblePower : public std::runtime_error {
 public:
  InfeasiblePower(double requested_w_per_ah, double max_w_per_ah, double time_s = 0.0)
      : std::runtime_error("infeasible power: requested " + std::to_string(requested_w_per_ah) +
                           " W/Ah exceeds deliverable maximum " + std::to_string(max_w_per_ah) +
                           " W/Ah at t=" + std::to_string(time_s) + " s"),
        requested(requested_w_per_ah),
        max_deliverable(max_w_per_ah),
        time(time_s) {}

  double requested;
  double max_deliverable;
  double time;
};

// Effective capacity requested from a trace that did not end at the cutoff voltage.
class UndefinedCapacity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what, std::vector<double> parameters = {})
      : std::runtime_error(what), parameters(std::move(parameters)) {}

  std::vector<double> parameters;  // offending parameter vector, when there is one
};

}  // namespace mrange
