#include "msaccel/oracle.hpp"

#include <cmath>

#include "msaccel/linalg.hpp"

namespace msaccel {

namespace {

double ms_residual_norm(const Vector& x, const Vector& y, const Vector& grad_x,
                        double lambda) {
  return (x - y + grad_x / lambda).norm();
}

// one MS check against a fixed Hessian/gradient pair evaluated at y;
// costs one linear solve and one gradient
CheckMsOutcome check_against(const Objective& obj, const Matrix& hess_y,
                             const Vector& grad_y, const Vector& y,
                             double lambda, double sigma, Counters& counters) {
  CheckMsOutcome out;
  out.x = y + reg_newton_step(hess_y, grad_y, lambda);
  ++counters.linear_solves;
  out.grad_at_x = obj.gradient(out.x);
  ++counters.gradient_evals;
  if (!out.grad_at_x.allFinite())
    throw Error(ErrorKind::invalid_input, "check_ms: non-finite gradient");
  out.step_norm = (out.x - y).norm();
  if (out.step_norm == 0.0) {
    out.residual = 0.0;
    out.pass = true;
    return out;
  }
  out.residual = ms_residual_norm(out.x, y, out.grad_at_x, lambda);
  out.pass = out.residual <= sigma * out.step_norm;
  return out;
}

OracleResult result_from(const Vector&, CheckMsOutcome&& chk, double lambda,
                         Counters counters) {
  OracleResult res;
  res.x = std::move(chk.x);
  res.lambda = lambda;
  res.step_norm = chk.step_norm;
  res.ms_residual = chk.residual;
  res.grad_at_x = std::move(chk.grad_at_x);
  res.counters = counters;
  return res;
}

}  // namespace

void finalize_certificate(const Objective& obj, const Vector& y,
                          OracleResult& result) {
  if (result.certified()) return;
  if (result.grad_at_x.size() == 0) {
    result.grad_at_x = obj.gradient(result.x);
    ++result.counters.gradient_evals;
  }
  result.step_norm = (result.x - y).norm();
  result.ms_residual = result.step_norm == 0.0
                           ? 0.0
                           : ms_residual_norm(result.x, y, result.grad_at_x,
                                              result.lambda);
}

bool movement_bound_holds(double s, double c, double lambda,
                          double step_norm) {
  if (!(c > 0.0)) throw Error(ErrorKind::invalid_input, "movement bound: c > 0");
  if (s == 1.0) return lambda <= c;
  if (std::isinf(s)) return step_norm >= 1.0 / c;
  return step_norm >= std::pow(lambda / std::pow(c, s), 1.0 / (s - 1.0));
}

CheckMsOutcome check_ms(const Objective& obj, const Vector& y, double lambda,
                        double sigma) {
  if (!(lambda > 0.0))
    throw Error(ErrorKind::invalid_input, "check_ms: lambda must be > 0");
  const Vector grad_y = obj.gradient(y);
  if (!grad_y.allFinite())
    throw Error(ErrorKind::invalid_input, "check_ms: non-finite gradient");
  Counters counters;
  return check_against(obj, obj.hessian(y), grad_y, y, lambda, sigma,
                       counters);
}

OracleResult gd_oracle(const Objective& obj, const Vector& y, double eta) {
  if (!(eta > 0.0))
    throw Error(ErrorKind::invalid_input, "gd_oracle: eta must be > 0");
  OracleResult res;
  res.counters.gradient_evals = 1;
  const Vector grad_y = obj.gradient(y);
  res.x = y - eta * grad_y;
  res.lambda = 1.0 / eta;
  res.step_norm = eta * grad_y.norm();
  res.stationary = res.step_norm == 0.0;
  return res;
}

OracleResult cr_oracle(const Objective& obj, const Vector& y, double m_param) {
  if (!(m_param > 0.0))
    throw Error(ErrorKind::invalid_input, "cr_oracle: M must be > 0");

  OracleResult res;
  const Vector grad_y = obj.gradient(y);
  ++res.counters.gradient_evals;
  if (grad_y.norm() == 0.0) {
    res.x = y;
    res.lambda = kLambdaNewton;
    res.grad_at_x = grad_y;
    res.ms_residual = 0.0;
    res.stationary = true;
    return res;
  }
  const Matrix hess_y = obj.hessian(y);
  ++res.counters.hessian_evals;

  Vector step;
  // Delta(lambda) = ||(H + lambda I)^{-1} g|| is non-increasing, so
  // h(lambda) = lambda - (M/2) Delta(lambda) is increasing with a single
  // root: bracket it and bisect with geometric midpoints until
  // lambda / ((M/2) Delta(lambda)) lands in [1 - 1e-5, 1 + 1e-5].
  auto delta = [&](double lambda) {
    step = reg_newton_step(hess_y, grad_y, lambda);
    ++res.counters.linear_solves;
    return step.norm();
  };

  double lo = kLambdaNewton;
  double target_lo = 0.5 * m_param * delta(lo);
  if (lo >= target_lo) {
    // fixpoint sits below the floor: an (almost) pure Newton step
    res.floor_hit = true;
    res.lambda = lo;
  } else {
    double hi = 2.0 * target_lo;
    while (hi < 0.5 * m_param * delta(hi)) {
      hi *= 2.0;
      if (hi > kLambdaCeiling)
        throw Error(ErrorKind::bisection_failure,
                    "cr_oracle: bracket expansion exceeded 1e30");
    }
    double lambda = hi;
    for (int iter = 0;; ++iter) {
      if (iter >= 200)
        throw Error(ErrorKind::bisection_failure,
                    "cr_oracle: bisection failed to converge");
      lambda = std::sqrt(lo * hi);
      const double ratio = lambda / (0.5 * m_param * delta(lambda));
      if (ratio >= 1.0 - 1e-5 && ratio <= 1.0 + 1e-5) break;
      if (ratio < 1.0)
        lo = lambda;
      else
        hi = lambda;
    }
    res.lambda = lambda;
    // the last delta() evaluation solved at the returned lambda
  }
  res.x = y + step;
  res.step_norm = step.norm();
  res.grad_at_x = obj.gradient(res.x);
  ++res.counters.gradient_evals;
  res.ms_residual = ms_residual_norm(res.x, y, res.grad_at_x, res.lambda);
  return res;
}

OracleResult amsn(const Objective& obj, const Vector& y, double lambda_prime,
                  double sigma, bool lazy) {
  if (!(lambda_prime > 0.0))
    throw Error(ErrorKind::invalid_input, "amsn: lambda' must be > 0");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw Error(ErrorKind::invalid_input, "amsn: sigma must be in (0,1)");

  Counters counters;
  const Vector grad_y = obj.gradient(y);
  ++counters.gradient_evals;
  if (!grad_y.allFinite())
    throw Error(ErrorKind::invalid_input, "amsn: non-finite gradient");
  const Matrix hess_y = obj.hessian(y);
  ++counters.hessian_evals;

  auto check = [&](double lambda) {
    return check_against(obj, hess_y, grad_y, y, lambda, sigma, counters);
  };

  CheckMsOutcome first = check(lambda_prime);
  double lambda_vld = 0.0, lambda_invld = 0.0;
  CheckMsOutcome valid;
  bool floor_hit = false;

  if (first.pass) {
    if (lazy) return result_from(y, std::move(first), lambda_prime, counters);
    // decrease at a double-exponential rate until a check fails or the
    // floor cuts the search off
    lambda_vld = lambda_prime;
    valid = std::move(first);
    for (int k = 0;;) {
      double cand = lambda_vld / std::exp2(std::exp2(k));
      if (cand < kLambdaNewton) cand = kLambdaNewton;
      if (cand >= lambda_vld) {
        floor_hit = true;
        break;
      }
      CheckMsOutcome chk = check(cand);
      if (chk.pass) {
        lambda_vld = cand;
        valid = std::move(chk);
        ++k;
        if (cand == kLambdaNewton) {
          floor_hit = true;
          break;
        }
      } else {
        lambda_invld = cand;
        break;
      }
    }
  } else {
    // increase double-exponentially until a check passes
    lambda_invld = lambda_prime;
    for (int k = 0;;) {
      const double cand = lambda_invld * std::exp2(std::exp2(k));
      if (cand > kLambdaCeiling)
        throw Error(ErrorKind::non_convergence,
                    "amsn: lambda exceeded 1e30 without passing the MS check");
      CheckMsOutcome chk = check(cand);
      if (chk.pass) {
        lambda_vld = cand;
        valid = std::move(chk);
        break;
      }
      lambda_invld = cand;
      ++k;
    }
  }

  if (!floor_hit) {
    // geometric-mean bisection down to a factor-2 bracket
    while (lambda_invld < lambda_vld / 2.0) {
      const double mid = std::sqrt(lambda_invld * lambda_vld);
      CheckMsOutcome chk = check(mid);
      if (chk.pass) {
        lambda_vld = mid;
        valid = std::move(chk);
      } else {
        lambda_invld = mid;
      }
    }
  }

  OracleResult res = result_from(y, std::move(valid), lambda_vld, counters);
  res.floor_hit = floor_hit;
  res.stationary = grad_y.norm() == 0.0;
  return res;
}

OracleResult amsn_fo(const Objective& obj, const Vector& y,
                     double lambda_prime, double sigma) {
  if (!(lambda_prime > 0.0))
    throw Error(ErrorKind::invalid_input, "amsn_fo: lambda' must be > 0");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw Error(ErrorKind::invalid_input, "amsn_fo: sigma must be in (0,1)");

  Counters counters;
  const Vector grad_y = obj.gradient(y);
  ++counters.gradient_evals;
  if (!grad_y.allFinite())
    throw Error(ErrorKind::invalid_input, "amsn_fo: non-finite gradient");

  OracleResult res;
  if (grad_y.norm() == 0.0) {
    res.x = y;
    res.lambda = lambda_prime;
    res.grad_at_x = grad_y;
    res.ms_residual = 0.0;
    res.stationary = true;
    res.counters = counters;
    return res;
  }

  const Vector b = -grad_y;
  const int cap = conj_res_default_cap(obj.dim());
  double lambda = lambda_prime;
  for (;;) {
    if (lambda > kLambdaCeiling)
      throw Error(ErrorKind::non_convergence,
                  "amsn_fo: lambda exceeded 1e30 without passing the MS check");
    auto apply = [&](const Vector& v) {
      ++counters.hvps;
      return Vector(obj.hvp(y, v) + lambda * v);
    };
    ConjResResult cr = conj_res(apply, b, lambda * sigma, cap);
    const Vector x = y + cr.w;
    const Vector grad_x = obj.gradient(x);
    ++counters.gradient_evals;
    const double step_norm = cr.w.norm();
    const double residual =
        step_norm == 0.0 ? 0.0 : ms_residual_norm(x, y, grad_x, lambda);
    if (residual <= sigma * step_norm) {
      res.x = x;
      res.lambda = lambda;
      res.step_norm = step_norm;
      res.ms_residual = residual;
      res.grad_at_x = grad_x;
      res.counters = counters;
      return res;
    }
    lambda *= 2.0;
  }
}

}  // namespace msaccel
