#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace msaccel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Work counters attached to oracle results and accumulated per run.
struct Counters {
  std::int64_t hessian_evals = 0;
  std::int64_t linear_solves = 0;
  std::int64_t hvps = 0;
  std::int64_t gradient_evals = 0;

  Counters& operator+=(const Counters& o) {
    hessian_evals += o.hessian_evals;
    linear_solves += o.linear_solves;
    hvps += o.hvps;
    gradient_evals += o.gradient_evals;
    return *this;
  }
};

enum class ErrorKind {
  invalid_input,   // bad arguments, dimension mismatches
  config,          // bad experiment configuration
  parse,           // unreadable input file
  divergence,      // non-finite iterates
  iteration_budget,// an inner solver exceeded its cap
  non_convergence, // a search loop left its admissible range
  bisection_failure,
  audit_input,     // trace/schema unusable for auditing
  audit_failure,   // an invariant check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace msaccel
