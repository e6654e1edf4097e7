#include "msaccel/objective.hpp"

#include <cmath>

namespace msaccel {

namespace {

// log(1 + exp(t)) without overflow
double softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_dim(const Objective& obj, const Vector& x) {
  if (x.size() != obj.dim())
    throw Error(ErrorKind::invalid_input,
                "objective expects dimension " + std::to_string(obj.dim()) +
                    ", got " + std::to_string(x.size()));
}

class LogisticObjective final : public Objective {
 public:
  explicit LogisticObjective(Dataset data) : data_(std::move(data)) {
    if (data_.n() == 0)
      throw Error(ErrorKind::invalid_input, "logistic objective: empty data");
    for (Eigen::Index i = 0; i < data_.n(); ++i)
      if (data_.labels[i] != 1.0 && data_.labels[i] != -1.0)
        throw Error(ErrorKind::invalid_input,
                    "logistic objective: labels must be -1 or +1");
  }

  Eigen::Index dim() const override { return data_.d(); }

  double value(const Vector& x) const override {
    require_dim(*this, x);
    const Vector t = margins(x);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) sum += softplus(-t[i]);
    return sum / static_cast<double>(data_.n());
  }

  Vector gradient(const Vector& x) const override {
    require_dim(*this, x);
    const Vector t = margins(x);
    Vector coef(t.size());
    // d/dt softplus(-t) = -sigmoid(-t) = -(1 - sigmoid(t))
    for (Eigen::Index i = 0; i < t.size(); ++i)
      coef[i] = -data_.labels[i] * sigmoid(-t[i]);
    return data_.features.transpose() * coef / static_cast<double>(data_.n());
  }

  Matrix hessian(const Vector& x) const override {
    require_dim(*this, x);
    const Vector w = hess_weights(x);
    Matrix h = data_.features.transpose() * w.asDiagonal() * data_.features /
               static_cast<double>(data_.n());
    // the triple product is symmetric only up to rounding; make it exact
    h = ((h + h.transpose()) * 0.5).eval();
    return h;
  }

  // two matrix-vector passes over the feature matrix; never forms the
  // Hessian, so aMSN-fo's HVP counter reflects genuine products
  Vector hvp(const Vector& x, const Vector& v) const override {
    require_dim(*this, x);
    require_dim(*this, v);
    const Vector w = hess_weights(x);
    const Vector fv = data_.features * v;
    return data_.features.transpose() * w.cwiseProduct(fv) /
           static_cast<double>(data_.n());
  }

 private:
  Vector margins(const Vector& x) const {
    return data_.labels.cwiseProduct(data_.features * x);
  }

  Vector hess_weights(const Vector& x) const {
    const Vector t = margins(x);
    Vector w(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double s = sigmoid(t[i]);
      w[i] = s * (1.0 - s);
    }
    return w;
  }

  Dataset data_;
};

class WorstCaseObjective final : public Objective {
 public:
  explicit WorstCaseObjective(int d) : d_(d) {
    if (d < 1)
      throw Error(ErrorKind::invalid_input, "worst-case chain needs d >= 1");
  }

  Eigen::Index dim() const override { return d_; }

  double value(const Vector& x) const override {
    require_dim(*this, x);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d_; ++i) {
      const double u = diff(x, i);
      sum += std::abs(u) * u * u;
    }
    return sum;
  }

  Vector gradient(const Vector& x) const override {
    require_dim(*this, x);
    // d|u|^3/du = 3 u |u|; the chain couples consecutive coordinates
    Vector g = Vector::Zero(d_);
    for (Eigen::Index i = 0; i < d_; ++i) {
      const double u = diff(x, i);
      const double du = 3.0 * u * std::abs(u);
      g[i] += du;
      if (i > 0) g[i - 1] -= du;
    }
    return g;
  }

  Matrix hessian(const Vector& x) const override {
    require_dim(*this, x);
    // d^2|u|^3/du^2 = 6|u|, zero at the kinks (the function is C^2)
    Matrix h = Matrix::Zero(d_, d_);
    for (Eigen::Index i = 0; i < d_; ++i) {
      const double w = 6.0 * std::abs(diff(x, i));
      h(i, i) += w;
      if (i > 0) {
        h(i - 1, i - 1) += w;
        h(i, i - 1) -= w;
        h(i - 1, i) -= w;
      }
    }
    return h;
  }

  Vector hvp(const Vector& x, const Vector& v) const override {
    require_dim(*this, x);
    require_dim(*this, v);
    Vector out = Vector::Zero(d_);
    for (Eigen::Index i = 0; i < d_; ++i) {
      const double w = 6.0 * std::abs(diff(x, i));
      const double dv = i > 0 ? v[i] - v[i - 1] : v[i];
      out[i] += w * dv;
      if (i > 0) out[i - 1] -= w * dv;
    }
    return out;
  }

 private:
  double diff(const Vector& x, Eigen::Index i) const {
    return i == 0 ? x[0] - 1.0 : x[i] - x[i - 1];
  }

  Eigen::Index d_;
};

class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix q, Vector b) : q_(std::move(q)), b_(std::move(b)) {
    if (q_.rows() != q_.cols() || q_.rows() != b_.size())
      throw Error(ErrorKind::invalid_input, "quadratic: dimension mismatch");
    if (q_ != q_.transpose())
      throw Error(ErrorKind::invalid_input, "quadratic: Q must be symmetric");
  }

  Eigen::Index dim() const override { return b_.size(); }

  double value(const Vector& x) const override {
    require_dim(*this, x);
    return 0.5 * x.dot(q_ * x) - b_.dot(x);
  }

  Vector gradient(const Vector& x) const override {
    require_dim(*this, x);
    return q_ * x - b_;
  }

  Matrix hessian(const Vector& x) const override {
    require_dim(*this, x);
    return q_;
  }

  Vector hvp(const Vector& x, const Vector& v) const override {
    require_dim(*this, x);
    require_dim(*this, v);
    return q_ * v;
  }

 private:
  Matrix q_;
  Vector b_;
};

}  // namespace

std::unique_ptr<Objective> make_logistic(Dataset data) {
  return std::make_unique<LogisticObjective>(std::move(data));
}

std::unique_ptr<Objective> make_worst_case(int d) {
  return std::make_unique<WorstCaseObjective>(d);
}

std::unique_ptr<Objective> make_quadratic(Matrix q, Vector b) {
  return std::make_unique<QuadraticObjective>(std::move(q), std::move(b));
}

double hessian_lipschitz_bound(const Dataset& data) {
  if (data.n() == 0)
    throw Error(ErrorKind::invalid_input, "hessian_lipschitz_bound: empty data");
  const Matrix second_moment = data.features.transpose() * data.features /
                               static_cast<double>(data.n());
  // power iteration; the start vector is deterministic and generic
  const Eigen::Index d = second_moment.rows();
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i)
    v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(d);
  v.normalize();
  double eig = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    Vector next = second_moment * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;  // all-zero features
    next /= norm;
    const double rayleigh = next.dot(second_moment * next);
    if (iter > 0 && std::abs(rayleigh - eig) <= 1e-14 * std::max(rayleigh, 1e-300)) {
      eig = rayleigh;
      break;
    }
    eig = rayleigh;
    v = next;
  }
  double max_row_norm = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i)
    max_row_norm = std::max(max_row_norm, data.features.row(i).norm());
  return eig * max_row_norm;
}

}  // namespace msaccel
