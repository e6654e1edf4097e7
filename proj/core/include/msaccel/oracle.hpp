#pragma once

#include <functional>

#include "msaccel/objective.hpp"
#include "msaccel/types.hpp"

namespace msaccel {

// Regularization floor: below this value a regularized step is effectively a
// plain Newton step, and search loops stop decreasing lambda.
inline constexpr double kLambdaNewton = 1e-10;

// Guard against runaway lambda growth on non-convex or non-finite inputs.
inline constexpr double kLambdaCeiling = 1e30;

// One oracle answer (x, lambda) plus its certificate and cost.
//
// The certificate fields ms_residual = ||x - (y - grad f(x)/lambda)|| and
// grad_at_x are filled by oracles that evaluate grad f(x) anyway (the
// adaptive ones and the cubic-regularized step). The gradient-step oracle
// leaves them unset; callers that need them use finalize_certificate, which
// charges the extra gradient evaluation to the result.
struct OracleResult {
  Vector x;
  double lambda = 0.0;
  double step_norm = 0.0;            // ||x - y||
  double ms_residual = -1.0;         // negative until certified
  Vector grad_at_x;                  // size 0 until certified
  Counters counters;
  bool floor_hit = false;            // lambda clamped at kLambdaNewton
  bool stationary = false;           // grad f(y) was exactly zero

  bool certified() const { return ms_residual >= 0.0; }

  // The Def.-1 test at factor sigma, with slack for rounding.
  bool ms_ok(double sigma) const {
    return certified() &&
           ms_residual <= sigma * step_norm + 1e-9 * (1.0 + step_norm);
  }
};

// Computes grad_at_x / ms_residual if absent, charging one gradient eval.
void finalize_certificate(const Objective& obj, const Vector& y,
                          OracleResult& result);

// (s, c)-movement bound predicate: for s in (1, inf) requires
// ||x - y|| >= (lambda / c^s)^{1/(s-1)}; s = inf requires ||x - y|| >= 1/c;
// s = 1 requires lambda <= c.
bool movement_bound_holds(double s, double c, double lambda, double step_norm);

struct MovementCertificate {
  double s = 2.0;  // order; may be infinity
  double c = 1.0;
  bool holds = false;
};

inline MovementCertificate certify_movement(double s, double c,
                                            const OracleResult& result) {
  return {s, c, movement_bound_holds(s, c, result.lambda, result.step_norm)};
}

struct CheckMsOutcome {
  bool pass = false;
  Vector x;
  Vector grad_at_x;
  double residual = 0.0;
  double step_norm = 0.0;
};

// The regularized Newton step x = y - (H + lambda I)^{-1} g followed by the
// MS test ||x - (y - grad f(x)/lambda)|| <= sigma ||x - y||. A zero step
// (stationary y) passes with residual 0. Costs one solve and one gradient.
CheckMsOutcome check_ms(const Objective& obj, const Vector& y, double lambda,
                        double sigma);

// Gradient step: x = y - eta grad f(y), lambda = 1/eta. One gradient eval;
// certificate left to the caller.
OracleResult gd_oracle(const Objective& obj, const Vector& y, double eta);

// Cubic-regularized Newton step. Bisects (on a log scale, geometric
// midpoints) for lambda with lambda / ((M/2) ||(H + lambda I)^{-1} g||) in
// [1 - 1e-5, 1 + 1e-5], then returns x = y - (H + lambda I)^{-1} g. If the
// target lambda sits below kLambdaNewton the floor is returned and flagged.
// A stationary query returns x = y at the floor.
OracleResult cr_oracle(const Objective& obj, const Vector& y, double m_param);

// Adaptive MS-Newton oracle. Starting from the guess lambda', searches for a
// lambda whose regularized step passes the MS check while lambda/2 fails,
// via double-exponential expansion (factors 2^(2^k)) and geometric-mean
// bisection. lazy = true returns the guess immediately when it passes. The
// decrease loop stops at kLambdaNewton (floor_hit). The linear-solve counter
// equals the number of MS checks performed.
OracleResult amsn(const Objective& obj, const Vector& y, double lambda_prime,
                  double sigma, bool lazy);

// First-order version: steps come from ConjRes over Hessian-vector products
// with stopping threshold lambda * sigma, and lambda doubles from the guess
// until the first MS pass (only the lazy variant exists). Counts HVPs and
// gradients; never evaluates a full Hessian.
OracleResult amsn_fo(const Objective& obj, const Vector& y,
                     double lambda_prime, double sigma);

// An MS oracle bound to an objective, as consumed by the acceleration loops.
// `first_call` lets adaptive wrappers run the opening call non-lazily.
using MsOracleFn =
    std::function<OracleResult(const Vector& y, double lambda_prime,
                               bool first_call)>;

}  // namespace msaccel
