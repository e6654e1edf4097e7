#include <doctest.h>

#include <cmath>

#include "msaccel/baselines.hpp"
#include "msaccel/prng.hpp"

using namespace msaccel;

namespace {

std::unique_ptr<Objective> diag_quadratic(const Vector& diag, const Vector& b) {
  Matrix q = Matrix::Zero(diag.size(), diag.size());
  q.diagonal() = diag;
  return make_quadratic(q, b);
}

}  // namespace

TEST_CASE("newton solves a quadratic in one step") {
  Vector diag(3);
  diag << 1.0, 3.0, 10.0;
  Vector b(3);
  b << 1.0, -2.0, 0.5;
  const auto obj = diag_quadratic(diag, b);
  const Vector x_star = b.cwiseQuotient(diag);
  MethodConfig cfg;
  cfg.method = Method::newton;
  RunBudget budget;
  budget.max_oracle_calls = 1;
  const Reference ref{x_star, obj->value(x_star)};
  const RunResult run =
      baseline_run(*obj, Vector::Zero(3), cfg, budget, ref);
  CHECK(run.trace.back().gap <= 1e-10);
  CHECK((run.x_final - x_star).norm() <= 1e-9);
}

TEST_CASE("gd contracts geometrically on the identity quadratic") {
  const auto obj = diag_quadratic(Vector::Ones(2), Vector::Zero(2));
  MethodConfig cfg;
  cfg.method = Method::gd;
  cfg.eta = 0.5;
  RunBudget budget;
  budget.max_oracle_calls = 12;
  Vector x0(2);
  x0 << 1.0, -1.0;
  const RunResult run = baseline_run(*obj, x0, cfg, budget, std::nullopt);
  // x_t = (1 - eta)^t x0, so f halves by (1 - eta)^2 each step
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    const double expect =
        0.5 * std::pow(1.0 - cfg.eta, 2.0 * static_cast<double>(i)) *
        x0.squaredNorm();
    CHECK(run.trace[i].f == doctest::Approx(expect).epsilon(1e-12));
    CHECK(run.trace[i].lambda == doctest::Approx(2.0));  // 1/eta
  }
}

TEST_CASE("agd beats the classical envelope on a quadratic") {
  Vector diag(4);
  diag << 0.2, 0.5, 0.8, 1.0;
  Vector b = Vector::Zero(4);
  const auto obj = diag_quadratic(diag, b);
  Vector x0(4);
  x0 << 1.0, 1.0, -1.0, 2.0;
  MethodConfig cfg;
  cfg.method = Method::agd;
  cfg.eta = 1.0;  // 1 / lambda_max
  RunBudget budget;
  budget.max_oracle_calls = 100;
  const Reference ref{Vector::Zero(4), 0.0};
  const RunResult run = baseline_run(*obj, x0, cfg, budget, ref);
  const double t = 100.0;
  const double envelope = 2.0 * x0.squaredNorm() / (cfg.eta * (t + 1) * (t + 1));
  CHECK(run.trace.back().gap <= envelope);
}

TEST_CASE("song schedule arithmetic: A_3 = 1 when 2 H R = 1") {
  const auto obj = diag_quadratic(Vector::Ones(2), Vector::Ones(2));
  MethodConfig cfg;
  cfg.method = Method::song;
  cfg.m_param = 1.0;
  cfg.h_estimate = 0.5;
  cfg.r_estimate = 1.0;  // 2 H R = 1
  RunBudget budget;
  budget.max_oracle_calls = 4;
  const RunResult run =
      baseline_run(*obj, Vector::Zero(2), cfg, budget, std::nullopt);
  REQUIRE(run.trace.size() >= 4);
  CHECK(run.trace[3].a_big == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run.trace[1].a_big ==
        doctest::Approx(std::pow(1.0 / 3.0, 3.5)).epsilon(1e-9));
}

TEST_CASE("iterating the first-order oracle halves lambda on quadratics") {
  const auto obj = diag_quadratic(Vector::Ones(3), Vector::Ones(3));
  RunBudget budget;
  budget.max_oracle_calls = 5;
  const RunResult run = iterate_oracle_run(*obj, Vector::Zero(3),
                                           /*use_first_order=*/true, 0.1, 0.5,
                                           budget, std::nullopt);
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    const double expect = 0.1 * std::pow(0.5, static_cast<double>(i));
    CHECK(run.trace[i].lambda == doctest::Approx(expect).epsilon(1e-12));
    CHECK(run.trace[i].lambda_prime ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("iterating from a stationary point exits immediately") {
  const auto obj = diag_quadratic(Vector::Ones(2), Vector::Zero(2));
  RunBudget budget;
  budget.max_oracle_calls = 50;
  const Reference ref{Vector::Zero(2), 0.0};
  const RunResult run = iterate_oracle_run(*obj, Vector::Zero(2), false, 0.1,
                                           0.5, budget, ref);
  CHECK(run.trace.size() == 2);
  CHECK(run.trace.back().gap == 0.0);
}

TEST_CASE("iterate-amsn descends with the quantitative slack on the chain") {
  const auto obj = make_worst_case(20);
  const double sigma = 0.5;
  RunBudget budget;
  budget.max_oracle_calls = 20;
  const RunResult run = iterate_oracle_run(*obj, Vector::Zero(20), false, 0.1,
                                           sigma, budget, std::nullopt);
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    const auto& row = run.trace[i];
    const auto& prev = run.trace[i - 1];
    // f(x_{t+1}) <= f(x_t) - lambda (1 - sigma^2) ||x_{t+1} - x_t||^2 / 2;
    // the trace's N column is exactly half the squared step
    CHECK(row.f <=
          prev.f - row.lambda * (1.0 - sigma * sigma) * row.n_term + 1e-9);
  }
}

TEST_CASE("cr descends monotonically with a safe M on the chain") {
  const auto obj = make_worst_case(20);
  MethodConfig cfg;
  cfg.method = Method::cr;
  cfg.m_param = 96.0;  // 2H for the chain's H = 48
  RunBudget budget;
  budget.max_oracle_calls = 20;
  const RunResult run =
      baseline_run(*obj, Vector::Zero(20), cfg, budget, std::nullopt);
  for (std::size_t i = 1; i < run.trace.size(); ++i)
    CHECK(run.trace[i].f <= run.trace[i - 1].f + 1e-12);
}

TEST_CASE("acr converges on a small quadratic") {
  Vector diag(3);
  diag << 0.5, 1.0, 2.0;
  Vector b(3);
  b << 1.0, 1.0, 1.0;
  const auto obj = diag_quadratic(diag, b);
  const Vector x_star = b.cwiseQuotient(diag);
  MethodConfig cfg;
  cfg.method = Method::acr;
  cfg.m_param = 2.0;
  RunBudget budget;
  budget.max_oracle_calls = 60;
  const Reference ref{x_star, obj->value(x_star)};
  const RunResult run =
      baseline_run(*obj, Vector::Zero(3), cfg, budget, ref);
  CHECK(run.trace.back().gap <= 1e-6);
}

TEST_CASE("grid-tuned gd picks a non-divergent step size") {
  const Dataset data = synthetic_gaussian(60, 8, 2);
  const auto obj = make_logistic(data);
  MethodConfig cfg;
  cfg.method = Method::gd;
  cfg.eta = 0.0;  // tune over the grid
  RunBudget budget;
  budget.max_oracle_calls = 40;
  const RunResult run =
      baseline_run(*obj, Vector::Zero(8), cfg, budget, std::nullopt);
  CHECK(std::isfinite(run.trace.back().f));
  CHECK(run.trace.back().f < run.trace.front().f);
}

TEST_CASE("divergence carries the partial trace") {
  const auto obj = make_worst_case(5);
  MethodConfig cfg;
  cfg.method = Method::gd;
  cfg.eta = 3000.0;
  RunBudget budget;
  budget.max_oracle_calls = 100;
  try {
    baseline_run(*obj, Vector::Zero(5), cfg, budget, std::nullopt);
    CHECK(false);
  } catch (const RunError& e) {
    CHECK(e.kind() == ErrorKind::divergence);
    CHECK(e.partial_trace.size() >= 1);
  }
}

TEST_CASE("baseline config validation") {
  const auto obj = diag_quadratic(Vector::Ones(2), Vector::Zero(2));
  MethodConfig cfg;
  cfg.method = Method::cr;
  cfg.m_param = 0.0;
  RunBudget budget;
  CHECK_THROWS_AS(baseline_run(*obj, Vector::Zero(2), cfg, budget, std::nullopt),
                  Error);
}
