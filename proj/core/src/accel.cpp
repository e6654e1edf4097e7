#include "msaccel/accel.hpp"

#include <chrono>
#include <cmath>

namespace msaccel {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct RunState {
  explicit RunState(const Objective& obj, const Vector& x0,
                    const std::optional<Reference>& reference)
      : obj(obj), ref(reference), start(Clock::now()) {
    x = x0;
    v = x0;
    best_x = x0;
    best_f = obj.value(x0);
  }

  void push_initial_row(double lambda0) {
    TraceRecord row;
    row.t = 0;
    row.f = best_f;
    row.lambda = 0.0;
    row.lambda_prime = lambda0;
    fill_reference_terms(row, best_f, 0.0);
    row.wall_ms = elapsed_ms(start);
    result.trace.push_back(row);
  }

  void fill_reference_terms(TraceRecord& row, double f_val, double n_term) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.gap = ref ? f_val - ref->f_star : nan;
    row.e_term = row.gap;
    row.d_term = ref ? 0.5 * (v - ref->x_star).squaredNorm() : nan;
    row.n_term = n_term;
  }

  // appends the row for outer iteration t (1-based) and refreshes best-so-far
  void push_row(std::int64_t t, double a_big, double lambda,
                double lambda_prime, bool up, double n_term) {
    const double f_val = obj.value(x);
    if (!std::isfinite(f_val) || !x.allFinite())
      throw RunError(ErrorKind::divergence,
                     "non-finite iterate at outer iteration " +
                         std::to_string(t),
                     result.trace);
    if (f_val < best_f) {
      best_f = f_val;
      best_x = x;
    }
    TraceRecord row;
    row.t = t;
    row.f = f_val;
    row.a_big = a_big;
    row.lambda = lambda;
    row.lambda_prime = lambda_prime;
    row.up_flag = up ? 1 : 0;
    fill_reference_terms(row, f_val, n_term);
    row.counters = result.totals;
    row.wall_ms = elapsed_ms(start);
    result.trace.push_back(row);
  }

  bool should_stop(const RunBudget& budget) const {
    if (result.oracle_calls >= budget.max_oracle_calls) return true;
    if (ref && budget.target_gap > 0.0 &&
        result.trace.back().gap <= budget.target_gap)
      return true;
    return elapsed_ms(start) / 1000.0 > budget.max_seconds;
  }

  RunResult finish() && {
    result.x_final = x;
    result.best_x = best_x;
    result.best_f = best_f;
    return std::move(result);
  }

  const Objective& obj;
  const std::optional<Reference>& ref;
  Clock::time_point start;
  Vector x, v, best_x;
  double best_f;
  RunResult result;
};

}  // namespace

double a_prime(double lambda_prime, double a_big) {
  if (!(lambda_prime > 0.0) || a_big < 0.0)
    throw Error(ErrorKind::invalid_input, "a_prime: need lambda' > 0, A >= 0");
  return (1.0 + std::sqrt(1.0 + 4.0 * lambda_prime * a_big)) /
         (2.0 * lambda_prime);
}

RunResult optimal_ms_run(const Objective& obj, const Vector& x0,
                         const MsOracleFn& oracle,
                         const OptimalMsOptions& options,
                         const RunBudget& budget,
                         const std::optional<Reference>& reference) {
  if (!(options.alpha > 1.0))
    throw Error(ErrorKind::invalid_input, "optimal_ms_run: alpha must be > 1");
  if (!(options.lambda0 > 0.0))
    throw Error(ErrorKind::invalid_input, "optimal_ms_run: lambda0 must be > 0");

  RunState st(obj, x0, reference);
  st.push_initial_row(options.lambda0);

  OracleResult res;
  try {
    res = oracle(x0, options.lambda0, /*first_call=*/true);
  } catch (const Error& e) {
    throw RunError(e.kind(),
                   std::string("oracle failed at iteration 1: ") + e.what(),
                   st.result.trace);
  }
  ++st.result.oracle_calls;
  st.result.totals += res.counters;
  double lambda_prime = res.lambda;  // lambda'_1 = lambda_1

  double a_big = 0.0;
  for (std::int64_t t = 0;; ++t) {
    const double ap = a_prime(lambda_prime, a_big);
    const double a_big_prime = a_big + ap;
    const Vector y =
        (a_big / a_big_prime) * st.x + (ap / a_big_prime) * st.v;
    if (t > 0) {
      try {
        res = oracle(y, lambda_prime, /*first_call=*/false);
      } catch (const Error& e) {
        throw RunError(e.kind(),
                       "oracle failed at iteration " + std::to_string(t + 1) +
                           ": " + e.what(),
                       st.result.trace);
      }
      ++st.result.oracle_calls;
      st.result.totals += res.counters;
    }
    Counters before = res.counters;
    finalize_certificate(obj, y, res);
    st.result.totals.gradient_evals +=
        res.counters.gradient_evals - before.gradient_evals;

    const double lambda = res.lambda;
    const bool up = lambda > lambda_prime;
    const double n_term = 0.5 * (res.x - y).squaredNorm();

    double a;
    if (up && options.damping) {
      const double gamma = lambda_prime / lambda;
      a = gamma * ap;
      const double a_big_next = a_big + a;
      if (options.argmin_damping) {
        st.x = obj.value(res.x) <= obj.value(st.x) ? res.x : st.x;
      } else {
        st.x = ((1.0 - gamma) * a_big / a_big_next) * st.x +
               (gamma * a_big_prime / a_big_next) * res.x;
      }
      a_big = a_big_next;
    } else {
      a = ap;
      a_big = a_big_prime;
      st.x = res.x;
    }
    st.v -= a * res.grad_at_x;
    st.push_row(t + 1, a_big, lambda, lambda_prime, up, n_term);

    lambda_prime = up ? options.alpha * lambda_prime
                      : lambda_prime / options.alpha;
    if (st.should_stop(budget)) break;
  }
  return std::move(st).finish();
}

RunResult ms_bisection_run(const Objective& obj, const Vector& x0,
                           const MsOracleFn& oracle,
                           const MsBisectionOptions& options,
                           const RunBudget& budget,
                           const std::optional<Reference>& reference) {
  if (!(options.rho > 1.0))
    throw Error(ErrorKind::invalid_input, "ms_bisection_run: rho must be > 1");
  if (!(options.lambda0 > 0.0))
    throw Error(ErrorKind::invalid_input,
                "ms_bisection_run: lambda0 must be > 0");

  constexpr double kBracketLo = 1e-30;
  constexpr double kBracketHi = 1e30;

  RunState st(obj, x0, reference);
  st.push_initial_row(options.lambda0);

  struct Probe {
    double lambda_prime;
    double ap;
    double a_big_prime;
    Vector y;
    OracleResult res;
    int cls;  // -1 low (lambda > lambda'), 0 valid, +1 high (lambda < lambda'/rho)
  };

  double warm = options.lambda0;
  double a_big = 0.0;

  for (std::int64_t t = 0;; ++t) {
    auto probe = [&](double lambda_prime) {
      Probe p;
      p.lambda_prime = lambda_prime;
      p.ap = a_prime(lambda_prime, a_big);
      p.a_big_prime = a_big + p.ap;
      p.y = (a_big / p.a_big_prime) * st.x + (p.ap / p.a_big_prime) * st.v;
      try {
        p.res = oracle(p.y, lambda_prime, t == 0);
      } catch (const Error& e) {
        throw RunError(e.kind(),
                       "oracle failed at iteration " + std::to_string(t + 1) +
                           ": " + e.what(),
                       st.result.trace);
      }
      ++st.result.oracle_calls;
      st.result.totals += p.res.counters;
      if (p.res.lambda > lambda_prime)
        p.cls = -1;
      else if (p.res.lambda < lambda_prime / options.rho)
        p.cls = +1;
      else
        p.cls = 0;
      return p;
    };

    Probe accepted = probe(warm);
    if (accepted.cls != 0) {
      // grow the bracket from the warm start, then bisect on a log scale
      double lo = 0.0, hi = 0.0;
      bool have_valid = false;
      if (accepted.cls < 0) {
        lo = warm;
        for (double cand = 2.0 * warm;; cand *= 2.0) {
          if (cand > kBracketHi)
            throw Error(ErrorKind::bisection_failure,
                        "ms_bisection_run: bracket grew past 1e30");
          accepted = probe(cand);
          if (accepted.cls == 0) { have_valid = true; break; }
          if (accepted.cls > 0) { hi = cand; break; }
          lo = cand;
        }
      } else {
        hi = warm;
        for (double cand = 0.5 * warm;; cand *= 0.5) {
          if (cand < kBracketLo)
            throw Error(ErrorKind::bisection_failure,
                        "ms_bisection_run: bracket shrank past 1e-30");
          accepted = probe(cand);
          if (accepted.cls == 0) { have_valid = true; break; }
          if (accepted.cls < 0) { lo = cand; break; }
          hi = cand;
        }
      }
      if (!have_valid) {
        for (int iter = 0;; ++iter) {
          if (iter >= 200 || hi <= lo * (1.0 + 1e-12))
            throw Error(ErrorKind::bisection_failure,
                        "ms_bisection_run: no valid lambda' in bracket");
          accepted = probe(std::sqrt(lo * hi));
          if (accepted.cls == 0) break;
          (accepted.cls < 0 ? lo : hi) = accepted.lambda_prime;
        }
      }
    }

    Counters before = accepted.res.counters;
    finalize_certificate(obj, accepted.y, accepted.res);
    st.result.totals.gradient_evals +=
        accepted.res.counters.gradient_evals - before.gradient_evals;

    a_big = accepted.a_big_prime;
    st.x = accepted.res.x;
    st.v -= accepted.ap * accepted.res.grad_at_x;
    st.push_row(t + 1, a_big, accepted.res.lambda, accepted.lambda_prime,
                /*up=*/false,
                0.5 * (accepted.res.x - accepted.y).squaredNorm());

    warm = accepted.res.lambda > warm ? 2.0 * warm : 0.5 * warm;
    if (st.should_stop(budget)) break;
  }
  return std::move(st).finish();
}

PotentialAuditReport audit_potential(const std::vector<TraceRecord>& trace,
                                     double sigma, double alpha,
                                     bool check_growth) {
  PotentialAuditReport report;
  if (trace.size() < 2 || trace.front().t != 0)
    throw Error(ErrorKind::audit_input,
                "audit_potential: trace must start at a t = 0 row");
  for (const auto& row : trace)
    if (!std::isfinite(row.e_term) || !std::isfinite(row.d_term))
      throw Error(ErrorKind::audit_input,
                  "audit_potential: missing potential terms (no reference?)");

  const double chain_scale =
      trace.front().a_big * trace.front().e_term + trace.front().d_term;

  report.potential_ok = true;
  report.worst_potential_slack = std::numeric_limits<double>::infinity();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const auto& cur = trace[i];
    const auto& nxt = trace[i + 1];
    const double ap = a_prime(nxt.lambda_prime, cur.a_big);
    const double a_big_prime = cur.a_big + ap;
    const double lhs = nxt.a_big * nxt.e_term + nxt.d_term +
                       (1.0 - sigma * sigma) * a_big_prime *
                           std::min(nxt.lambda, nxt.lambda_prime) * nxt.n_term;
    const double rhs = cur.a_big * cur.e_term + cur.d_term;
    // E_t carries rounding of order eps (1 + |f|), which A_t amplifies
    // without bound once the gap reaches the floating-point floor
    const double eval_noise = 4.0 * kEps * (cur.a_big + nxt.a_big) *
                              (1.0 + std::abs(cur.f) + std::abs(nxt.f));
    const double tol = 1e-8 * std::max(rhs, chain_scale) + eval_noise;
    const double margin = rhs + tol - lhs;
    if (margin < report.worst_potential_slack)
      report.worst_potential_slack = margin;
    if (margin < 0.0 && report.first_bad_row < 0) {
      report.potential_ok = false;
      report.first_bad_row = nxt.t;
      report.detail = "potential inequality fails at t = " +
                      std::to_string(nxt.t);
    }
  }

  double inv_sqrt_sum = 0.0;
  double down_sum = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    inv_sqrt_sum += 1.0 / std::sqrt(trace[i].lambda_prime);
    if (!trace[i].up_flag) down_sum += 1.0 / std::sqrt(trace[i].lambda_prime);
  }
  const double sqrt_a_final = std::sqrt(trace.back().a_big);
  report.growth_margin =
      sqrt_a_final -
      ((std::sqrt(alpha) - 1.0) / (4.0 * alpha)) * inv_sqrt_sum +
      1e-8 * sqrt_a_final;
  report.growth_ok = !check_growth || report.growth_margin >= 0.0;
  report.down_sum_ok =
      sqrt_a_final >= 0.5 * down_sum - 1e-8 * (1.0 + sqrt_a_final);
  return report;
}

}  // namespace msaccel
