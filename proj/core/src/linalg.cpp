#include "msaccel/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace msaccel {

Vector reg_newton_step(const Matrix& hessian, const Vector& gradient,
                       double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorKind::invalid_input, "reg_newton_step: lambda must be > 0");
  if (hessian.rows() != hessian.cols() || hessian.rows() != gradient.size())
    throw Error(ErrorKind::invalid_input, "reg_newton_step: dimension mismatch");

  const Eigen::Index d = hessian.rows();
  Matrix a = hessian;
  a.diagonal().array() += lambda;

  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    // rounding can push a barely-PSD matrix indefinite; nudge and retry once
    const double bump = 1e-12 * (a.trace() / static_cast<double>(d));
    a.diagonal().array() += bump;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorKind::invalid_input,
                  "reg_newton_step: factorization failed (matrix not PSD?)");
  }

  Vector w = llt.solve(-gradient);
  // one refinement pass keeps the residual at
  // ||(H + lambda I) w + g|| <= 1e-10 (||g|| + lambda ||w||)
  w -= llt.solve(a * w + gradient);
  return w;
}

ConjResResult conj_res(const std::function<Vector(const Vector&)>& apply_a,
                       const Vector& b, double threshold, int cap) {
  if (!b.allFinite())
    throw Error(ErrorKind::invalid_input, "conj_res: b must be finite");
  if (!(threshold > 0.0))
    throw Error(ErrorKind::invalid_input, "conj_res: threshold must be > 0");

  ConjResResult out;
  out.w = Vector::Zero(b.size());

  Vector r = -b;  // r_i = A w_i - b with w_0 = 0
  double r_norm = r.norm();
  double w_norm = 0.0;
  out.residual_norms.push_back(r_norm);
  out.iterate_norms.push_back(w_norm);
  if (r_norm <= 0.5 * threshold * w_norm) return out;

  Vector p = r;
  Vector s = apply_a(r);
  ++out.applies;
  Vector q = s;

  while (r_norm > 0.5 * threshold * w_norm) {
    if (out.iters >= cap)
      throw Error(ErrorKind::iteration_budget,
                  "conj_res: iteration cap " + std::to_string(cap) +
                      " exceeded, residual " + std::to_string(r_norm));
    const double rs = r.dot(s);
    const double qq = q.squaredNorm();
    if (qq == 0.0 || rs == 0.0)
      throw Error(ErrorKind::iteration_budget,
                  "conj_res: breakdown (map not PSD?), residual " +
                      std::to_string(r_norm));
    const double alpha = rs / qq;
    out.w -= alpha * p;
    r -= alpha * q;
    ++out.iters;

    if (out.iters % 50 == 0) {
      // refresh the recurrence against accumulated rounding
      const Vector true_r = apply_a(out.w) - b;
      ++out.applies;
      const double drift =
          (true_r - r).norm() / std::max(1.0, true_r.norm());
      out.max_drift = std::max(out.max_drift, drift);
      r = true_r;
    }

    const Vector s_next = apply_a(r);
    ++out.applies;
    const double beta = r.dot(s_next) / rs;
    p = beta * p + r;
    q = beta * q + s_next;
    s = s_next;

    r_norm = r.norm();
    w_norm = out.w.norm();
    out.residual_norms.push_back(r_norm);
    out.iterate_norms.push_back(w_norm);
  }
  return out;
}

}  // namespace msaccel
