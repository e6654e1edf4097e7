#pragma once

#include <memory>

#include "msaccel/dataset.hpp"
#include "msaccel/types.hpp"

namespace msaccel {

// A twice-differentiable convex test function. Implementations are immutable
// after construction; all evaluations are re-entrant.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Eigen::Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;

  // Hessian-vector product; matrix-free where the structure allows it.
  virtual Vector hvp(const Vector& x, const Vector& v) const = 0;
};

// f(x) = (1/n) sum_i log(1 + exp(-c_i phi_i^T x)), no intercept term.
// Values use the log1p(exp(.)) form so large margins do not overflow.
std::unique_ptr<Objective> make_logistic(Dataset data);

// Hbar = ||(1/n) sum_i phi_i phi_i^T||_op * max_i ||phi_i||, an upper bound
// on roughly ten times the Lipschitz constant of the logistic Hessian. The
// operator norm comes from power iteration on the second-moment matrix.
double hessian_lipschitz_bound(const Dataset& data);

// Chain function f(x) = |x_1 - 1|^3 + sum_{i>=2} |x_i - x_{i-1}|^3, the
// worst-case instance for second-order methods. Minimized at the all-ones
// vector with value 0. The Hessian is tridiagonal (stored dense).
std::unique_ptr<Objective> make_worst_case(int d);

// f(x) = x^T Q x / 2 - b^T x with exact derivatives. Q must be symmetric.
std::unique_ptr<Objective> make_quadratic(Matrix q, Vector b);

}  // namespace msaccel
