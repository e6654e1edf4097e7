#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msaccel/oracle.hpp"

namespace msaccel {

// One row per outer iteration. Counters are cumulative over the run; the
// potential terms E, D, N are relative to the supplied reference optimum
// (NaN when no reference was given).
struct TraceRecord {
  std::int64_t t = 0;
  double f = 0.0;
  double gap = 0.0;
  double a_big = 0.0;        // A_t
  double lambda = 0.0;       // lambda_t returned by the oracle
  double lambda_prime = 0.0; // lambda'_t used for the step
  int up_flag = 0;           // 1 when lambda_t > lambda'_t
  double e_term = 0.0;       // E_t = f(x_t) - f*
  double d_term = 0.0;       // D_t = ||v_t - x*||^2 / 2
  double n_term = 0.0;       // N_t = ||xtilde_t - y_{t-1}||^2 / 2
  Counters counters;
  double wall_ms = 0.0;
};

struct RunBudget {
  std::int64_t max_oracle_calls = 1000;
  double max_seconds = 1e18;
  double target_gap = 0.0;  // <= 0 disables the gap stop
};

struct Reference {
  Vector x_star;
  double f_star = 0.0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  Vector x_final;
  Vector best_x;
  double best_f = 0.0;
  Counters totals;
  std::int64_t oracle_calls = 0;
};

// Thrown when a run dies mid-way (non-finite iterates, oracle failure);
// carries the rows produced so far so partial traces can still be flushed.
class RunError : public Error {
 public:
  RunError(ErrorKind kind, const std::string& what,
           std::vector<TraceRecord> partial)
      : Error(kind, what), partial_trace(std::move(partial)) {}
  std::vector<TraceRecord> partial_trace;
};

// Positive root of lambda' a^2 - a - A = 0.
double a_prime(double lambda_prime, double a_big);

struct OptimalMsOptions {
  double alpha = 2.0;
  double lambda0 = 0.1;
  bool damping = true;          // off reproduces the ablation
  bool argmin_damping = false;  // pick argmin{f(xtilde), f(x_t)} instead of
                                // the convex combination on up steps
};

// Bisection-free MS acceleration with momentum damping. The first oracle
// call happens at x0 with the initial guess, after which lambda'_1 is set to
// the returned lambda_1; later guesses shrink by alpha on down steps and
// grow by alpha on up steps. Up steps scale a_{t+1} by gamma = lambda'/lambda
// and average the new point with the previous iterate.
RunResult optimal_ms_run(const Objective& obj, const Vector& x0,
                         const MsOracleFn& oracle,
                         const OptimalMsOptions& options,
                         const RunBudget& budget,
                         const std::optional<Reference>& reference);

struct MsBisectionOptions {
  double rho = 4.0;
  double lambda0 = 0.1;
};

// Classical MS acceleration. Each outer step probes lambda' values until the
// oracle's lambda lands in [lambda'/rho, lambda']: the warm-start guess is
// doubled or halved based on the previous iteration, the bracket grows by
// doubling/halving, and then geometric-mean bisection runs until a valid
// probe appears. Every probe is charged as an oracle call. Brackets leaving
// [1e-30, 1e30] raise a bisection-failure Error.
RunResult ms_bisection_run(const Objective& obj, const Vector& x0,
                           const MsOracleFn& oracle,
                           const MsBisectionOptions& options,
                           const RunBudget& budget,
                           const std::optional<Reference>& reference);

struct PotentialAuditReport {
  bool potential_ok = false;
  bool growth_ok = false;
  bool down_sum_ok = false;
  double worst_potential_slack = 0.0;  // most negative margin seen
  std::int64_t first_bad_row = -1;
  double growth_margin = 0.0;
  std::string detail;
};

// Per-step potential check
//   A_{t+1} E_{t+1} + D_{t+1} + (1-sigma^2) A'_{t+1} min(lambda, lambda')
//     N_{t+1} <= A_t E_t + D_t + tol,
// with tol = 1e-8 * max(A_t E_t + D_t, D_0): the chain is non-increasing
// from D_0, so slack is measured against the chain scale (A_t amplifies
// rounding in E_t far past any fixed relative slack once the gap reaches
// the floating-point floor). Also checks the terminal growth bound
//   sqrt(A_T) >= (sqrt(alpha)-1)/(4 alpha) sum_t 1/sqrt(lambda'_t) - tol
// and the down-step sum sqrt(A_T) >= (1/2) sum_{down t} 1/sqrt(lambda'_t).
// A' is reconstructed from A_t and lambda'_{t+1}. The trace must carry a
// t = 0 row. growth = true only makes sense for the bisection-free loop.
PotentialAuditReport audit_potential(const std::vector<TraceRecord>& trace,
                                     double sigma, double alpha,
                                     bool check_growth);

}  // namespace msaccel
