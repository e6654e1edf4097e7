#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "msaccel/types.hpp"

namespace msaccel {

// Solves (H + lambda I) w = -g through a Cholesky factorization, with one
// iterative-refinement pass so the residual satisfies
// ||(H + lambda I) w + g|| <= 1e-10 (||g|| + lambda ||w||) on the problem
// sizes this library targets. A factorization failure (indefiniteness from
// rounding) is retried once with lambda inflated by 1e-12 * trace scale.
Vector reg_newton_step(const Matrix& hessian, const Vector& gradient,
                       double lambda);

struct ConjResResult {
  Vector w;
  int iters = 0;
  std::int64_t applies = 0;  // applications of the linear map
  // per-iteration ||r_i|| and ||w_i||, including the initial state
  std::vector<double> residual_norms;
  std::vector<double> iterate_norms;
  double max_drift = 0.0;  // worst relative gap seen at residual recomputation
};

constexpr int conj_res_default_cap(Eigen::Index dim) {
  return static_cast<int>(10 * dim + 100);
}

// Conjugate Residuals / MinRes for a symmetric PSD map, run until
// ||A w - b|| <= (threshold / 2) ||w||. The stopping test is evaluated
// before each iteration, so b = 0 returns w = 0 untouched. Iterates minimize
// the residual norm over the growing Krylov subspace span{b, Ab, ...}.
// The true residual is recomputed (and the recurrence refreshed) every 50
// iterations. Exceeding `cap` iterations raises an iteration-budget Error
// that carries the last residual norm in its message.
ConjResResult conj_res(const std::function<Vector(const Vector&)>& apply_a,
                       const Vector& b, double threshold, int cap);

}  // namespace msaccel
