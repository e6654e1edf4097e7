// Acceptance suite: one verdict line per criterion, nonzero exit on failure.
// Each criterion pins its tolerances inline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <Eigen/QR>

#include "msaccel/harness.hpp"
#include "msaccel/linalg.hpp"
#include "msaccel/prng.hpp"
#include "msaccel/trace_io.hpp"

using namespace msaccel;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void verdict(int number, const std::string& name, bool pass,
             const std::string& detail) {
  std::printf("criterion %2d [%s] %s%s%s\n", number, pass ? "PASS" : "FAIL",
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// criteria 1-4 share one 60-call run of the bisection-free loop with the
// adaptive oracle on synthetic logistic data
struct SharedRun {
  ExperimentConfig cfg;
  BuiltObjective built;
  ExperimentOutput out;
  double seconds = 0.0;
};

SharedRun make_shared_run() {
  SharedRun sr;
  sr.cfg.objective = parse_objective_spec("synthetic:n=500,d=200,seed=1", 1);
  sr.cfg.method = Method::optms;
  sr.cfg.oracle = ExperimentConfig::Oracle::amsn;
  sr.cfg.sigma = 0.5;
  sr.cfg.alpha = 2.0;
  sr.cfg.lambda0 = 0.1;
  sr.cfg.budget.max_oracle_calls = 60;
  sr.built = build_objective(sr.cfg.objective);
  const auto t0 = Clock::now();
  sr.out = run_configured(sr.cfg, sr.built);
  sr.seconds = seconds_since(t0);
  return sr;
}

void criterion_1(const SharedRun& sr) {
  const bool certs = sr.out.worst_ms_slack <= 0.0;
  const bool fast = sr.seconds < 10.0;
  verdict(1, "MS-condition certificate (60-call aMSN run)", certs && fast,
          "worst residual slack " + fmt(sr.out.worst_ms_slack) + ", " +
              fmt(sr.seconds) + " s");
}

void criterion_2(const SharedRun& sr) {
  const PotentialAuditReport rep =
      audit_potential(sr.out.run.trace, sr.cfg.sigma, sr.cfg.alpha, true);
  verdict(2, "potential decrease at relative slack 1e-8", rep.potential_ok,
          "worst slack " + fmt(rep.worst_potential_slack));
}

void criterion_3(const SharedRun& sr) {
  const PotentialAuditReport rep =
      audit_potential(sr.out.run.trace, sr.cfg.sigma, sr.cfg.alpha, true);
  verdict(3, "growth bound sqrt(A_T) vs (sqrt(a)-1)/(4a) sum", rep.growth_ok,
          "margin " + fmt(rep.growth_margin));
}

void criterion_4(const SharedRun& sr) {
  bool ok = true;
  std::string detail;
  const auto& trace = sr.out.run.trace;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const auto& row = trace[i];
    if (row.lambda <= kLambdaNewton * (1.0 + 1e-6)) continue;
    const double query = row.t == 1 ? sr.cfg.lambda0 : row.lambda_prime;
    const double bound =
        2.0 + 2.0 * std::log2(1.0 + std::abs(std::log2(row.lambda / query)));
    const std::int64_t solves =
        row.counters.linear_solves - trace[i - 1].counters.linear_solves;
    if (solves > static_cast<std::int64_t>(std::ceil(bound - 1e-12))) {
      ok = false;
      detail = "t=" + std::to_string(row.t) + ": " + std::to_string(solves) +
               " > ceil(" + fmt(bound) + ")";
      break;
    }
  }
  verdict(4, "per-call linear-solve bound (Thm.-2 counter)", ok, detail);
}

void criterion_5() {
  const auto t0 = Clock::now();
  SplitMix64 rng(1234);
  bool mono_ok = true;
  for (int trial = 0; trial < 200 && mono_ok; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 28);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = rng.gaussian();
    Matrix a = m * m.transpose() / d;
    a = ((a + a.transpose()) * 0.5).eval();
    a.diagonal().array() += 0.3;
    Vector b(d);
    for (int i = 0; i < d; ++i) b[i] = rng.gaussian();
    auto apply = [&](const Vector& v) { return Vector(a * v); };
    const ConjResResult r = conj_res(apply, b, 1e-6, 10 * d + 100);
    for (std::size_t i = 1; i < r.residual_norms.size(); ++i) {
      if (r.residual_norms[i] >
          r.residual_norms[i - 1] * (1.0 + 1e-12) + 1e-300)
        mono_ok = false;
      if (r.iterate_norms[i] < r.iterate_norms[i - 1] * (1.0 - 1e-12))
        mono_ok = false;
    }
  }

  bool krylov_ok = true;
  for (int trial = 0; trial < 25 && krylov_ok; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 5);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = rng.gaussian();
    Matrix a = m * m.transpose() / d;
    a = ((a + a.transpose()) * 0.5).eval();
    a.diagonal().array() += 0.1;
    Vector b(d);
    for (int i = 0; i < d; ++i) b[i] = rng.gaussian();
    auto apply = [&](const Vector& v) { return Vector(a * v); };
    const ConjResResult r = conj_res(apply, b, 1e-12, 10 * d + 100);
    Matrix krylov(d, d);
    krylov.col(0) = b;
    for (int j = 1; j < d; ++j) krylov.col(j) = a * krylov.col(j - 1);
    for (int i = 1; i < static_cast<int>(r.residual_norms.size()) && i <= d;
         ++i) {
      const Matrix ak = a * krylov.leftCols(i);
      const Vector c = ak.colPivHouseholderQr().solve(b);
      const double best = (ak * c - b).norm();
      if (std::abs(r.residual_norms[static_cast<std::size_t>(i)] - best) >
          1e-8 * (1.0 + best))
        krylov_ok = false;
    }
  }
  const double secs = seconds_since(t0);
  verdict(5, "ConjRes monotonicity and Krylov residual optimality",
          mono_ok && krylov_ok && secs < 5.0,
          std::string(mono_ok ? "monotone" : "monotonicity BROKEN") + ", " +
              (krylov_ok ? "optimal" : "optimality BROKEN") + ", " +
              fmt(secs) + " s");
}

void criterion_6() {
  const Dataset data = synthetic_gaussian(200, 30, 3);
  const auto obj = make_logistic(data);
  const double m_param = 0.2 * hessian_lipschitz_bound(data);
  SplitMix64 rng(99);
  bool ok = true;
  std::string detail;
  int floor_flagged = 0;
  for (int t = 0; t < 50 && ok; ++t) {
    Vector y(30);
    for (int i = 0; i < 30; ++i) y[i] = 3.0 * rng.gaussian();
    const OracleResult res = cr_oracle(*obj, y, m_param);
    if (res.floor_hit) {
      ++floor_flagged;
      continue;
    }
    const double ratio = res.lambda / (0.5 * m_param * res.step_norm);
    if (!(ratio >= 1.0 - 1e-5 && ratio <= 1.0 + 1e-5)) {
      ok = false;
      detail = "fixpoint ratio " + fmt(ratio);
    }
    if (std::abs(res.lambda - 0.5 * m_param * res.step_norm) >
        2e-5 * res.lambda) {
      ok = false;
      detail = "movement identity broken";
    }
  }
  verdict(6, "cr_oracle fixpoint within 1e-5 and movement within 2e-5", ok,
          detail.empty() ? std::to_string(floor_flagged) + " floor-flagged"
                         : detail);
}

void criterion_7() {
  const auto t0 = Clock::now();
  const ObjectiveSpec spec = parse_objective_spec("worstcase:d=300", 1);
  const BuiltObjective built = build_objective(spec);
  const double m_param = 20.0;  // M = 2H with the chain's H = 10

  RunBudget budget;
  budget.max_oracle_calls = 150;
  const std::optional<Reference> ref = built.reference;
  const Vector x0 = Vector::Zero(300);

  MethodConfig cr_cfg;
  cr_cfg.method = Method::cr;
  cr_cfg.m_param = m_param;
  const double gap_cr =
      baseline_run(*built.objective, x0, cr_cfg, budget, ref)
          .trace.back()
          .gap;

  ExperimentConfig a1cr;
  a1cr.objective = spec;
  a1cr.method = Method::optms;
  a1cr.oracle = ExperimentConfig::Oracle::cr;
  a1cr.m_param = m_param;
  a1cr.budget = budget;
  const double gap_a1cr = run_configured(a1cr, built).final_gap;

  ExperimentConfig a1amsn = a1cr;
  a1amsn.oracle = ExperimentConfig::Oracle::amsn;
  const double gap_a1amsn = run_configured(a1amsn, built).final_gap;

  const double secs = seconds_since(t0);
  const bool ok = gap_a1cr < gap_cr && gap_a1amsn <= gap_a1cr && secs < 120.0;
  verdict(7, "worst-case chain ordering at t=150", ok,
          "CR " + fmt(gap_cr) + ", accel+CR " + fmt(gap_a1cr) +
              ", accel+aMSN " + fmt(gap_a1amsn) + ", " + fmt(secs) + " s");
}

void criterion_8() {
  ExperimentConfig cfg;
  cfg.objective = parse_objective_spec("synthetic:n=500,d=200,seed=7", 7);
  cfg.method = Method::optms;
  cfg.oracle = ExperimentConfig::Oracle::amsn;
  cfg.budget.max_oracle_calls = 60;
  const BuiltObjective built = build_objective(cfg.objective);
  const double damped = run_configured(cfg, built).final_gap;
  cfg.damping = false;
  const double ablated = run_configured(cfg, built).final_gap;
  const bool ok = damped * 10.0 <= ablated;
  verdict(8, "momentum damping beats the ablation by 10x", ok,
          "damped " + fmt(damped) + " vs ablated " + fmt(ablated));
}

void criterion_9() {
  bool ok = true;
  std::string detail;

  {  // Newton: any quadratic in one step
    const BuiltObjective built =
        build_objective(parse_objective_spec("quadratic:d=5", 1));
    ExperimentConfig cfg;
    cfg.objective = parse_objective_spec("quadratic:d=5", 1);
    cfg.method = Method::newton;
    cfg.budget.max_oracle_calls = 1;
    const double gap = run_configured(cfg, built).final_gap;
    if (gap > 1e-10) {
      ok = false;
      detail = "newton one-step gap " + fmt(gap);
    }
  }

  {  // GD on Q = I contracts at |1 - eta|
    const auto obj = make_quadratic(Matrix::Identity(3, 3), Vector::Zero(3));
    Vector x0(3);
    x0 << 1.0, -2.0, 0.5;
    MethodConfig cfg;
    cfg.method = Method::gd;
    cfg.eta = 0.7;
    RunBudget budget;
    budget.max_oracle_calls = 15;
    const RunResult run = baseline_run(*obj, x0, cfg, budget, std::nullopt);
    const double rate = std::abs(1.0 - cfg.eta);
    for (std::size_t i = 1; i < run.trace.size() && ok; ++i) {
      const double expect =
          0.5 * std::pow(rate, 2.0 * static_cast<double>(i)) *
          x0.squaredNorm();
      if (std::abs(run.trace[i].f - expect) > 1e-12 * (1.0 + expect)) {
        ok = false;
        detail = "gd contraction off at t=" + std::to_string(i);
      }
    }
  }

  {  // iterate-aMSN on the chain: quantitative per-step descent, 30 steps
    const auto obj = make_worst_case(50);
    const double sigma = 0.5;
    RunBudget budget;
    budget.max_oracle_calls = 30;
    const RunResult run = iterate_oracle_run(*obj, Vector::Zero(50), false,
                                             0.1, sigma, budget, std::nullopt);
    for (std::size_t i = 1; i < run.trace.size() && ok; ++i) {
      const auto& row = run.trace[i];
      const double allowed = run.trace[i - 1].f -
                             row.lambda * (1.0 - sigma * sigma) * row.n_term +
                             1e-9;
      if (row.f > allowed) {
        ok = false;
        detail = "iterate-aMSN descent broken at t=" + std::to_string(row.t);
      }
    }
  }
  verdict(9, "baseline sanity (Newton, GD contraction, iterate-aMSN)", ok,
          detail);
}

void criterion_10() {
  const fs::path dir = fs::temp_directory_path() / "msaccel_acceptance";
  fs::create_directories(dir);
  const std::string stem1 = (dir / "det1").string();
  const std::string stem2 = (dir / "det2").string();
  const std::string base =
      std::string(MSACCEL_CLI_PATH) +
      " run --method OPTMS --oracle AMSN --data synthetic:n=100,d=20,seed=5"
      " --budget-calls 20 --out ";
  const int c1 = std::system((base + stem1 + " > /dev/null").c_str());
  const int c2 = std::system((base + stem2 + " > /dev/null").c_str());

  auto strip_wall = [](const std::string& csv) {
    std::string out;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
      out += line.substr(0, line.rfind(','));
      out += '\n';
    }
    return out;
  };
  bool ok = WEXITSTATUS(c1) == 0 && WEXITSTATUS(c2) == 0;
  if (ok) {
    const std::string a = read_text_file(stem1 + ".csv");
    const std::string b = read_text_file(stem2 + ".csv");
    ok = strip_wall(a) == strip_wall(b);
  }
  verdict(10, "equal seeds give byte-identical numeric columns", ok, "");
}

}  // namespace

int main() {
  std::printf("msaccel acceptance suite\n");
  const SharedRun sr = make_shared_run();
  criterion_1(sr);
  criterion_2(sr);
  criterion_3(sr);
  criterion_4(sr);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
