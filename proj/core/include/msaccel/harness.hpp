#pragma once

#include <optional>
#include <string>

#include "msaccel/baselines.hpp"

namespace msaccel {

// Objective description accepted on the command line:
//   a LIBSVM file path (rows get unit-normalized),
//   "synthetic:n=500,d=200,seed=1",
//   "worstcase:d=300",
//   "quadratic:d=2" (the fixed instance Q = diag(1..d)/d, b = ones).
struct ObjectiveSpec {
  enum class Kind { libsvm, synthetic, worst_case, quadratic } kind;
  std::string path;
  int n = 0, d = 0;
  std::uint64_t seed = 0;

  std::string canonical() const;  // cache key / summary string
};

ObjectiveSpec parse_objective_spec(const std::string& text,
                                   std::uint64_t default_seed);

struct ExperimentConfig {
  ObjectiveSpec objective;
  Method method = Method::optms;
  enum class Oracle { amsn, amsn_fo, cr, gd } oracle = Oracle::amsn;
  double alpha = 2.0;
  double sigma = 0.5;
  double lambda0 = 0.1;
  double eta = 0.0;      // 0 = tune GD/AGD over the grid
  double m_param = 0.0;  // 0 = objective-dependent default (0.2 Hbar; 2H)
  double rho = 4.0;
  bool damping = true;
  bool lazy = true;      // off = aMSN runs non-lazily in every call
  RunBudget budget;
  std::uint64_t seed = 1;
  std::string out_stem = "msaccel_run";
  bool audit = false;
};

struct BuiltObjective {
  std::unique_ptr<Objective> objective;
  double hbar = 0.0;       // logistic only
  double m_default = 0.0;  // M handed to CR-style oracles when unset
  Reference reference;
};

// Materializes the objective, fills the CR default M (0.2 Hbar for
// logistic, 20 for the chain with its H = 10 estimate, 1 for quadratics)
// and computes the reference optimum: analytically for the chain (all-ones),
// otherwise by backtracking Newton to ||grad|| <= 1e-13, cached per
// canonical spec under $MSACCEL_CACHE when that is set.
BuiltObjective build_objective(const ObjectiveSpec& spec);

// Newton with Armijo backtracking run to ||grad f|| <= grad_tol.
Reference newton_reference(const Objective& obj, const Vector& x0,
                           double grad_tol, int max_iters = 500);

struct ExperimentOutput {
  RunResult run;
  double worst_ms_slack = 0.0;  // max over calls of residual - allowed
  std::int64_t floor_hits = 0;
  double final_gap = 0.0;
  double best_gap = 0.0;
  bool diverged = false;
  std::string divergence_message;
};

// Runs a configured experiment in memory. Oracle calls are wrapped so the
// MS certificate slack is tracked per call. A divergence is reported in the
// output (with the partial trace) rather than thrown.
ExperimentOutput run_configured(const ExperimentConfig& cfg,
                                const BuiltObjective& built);

// Full CLI-facing runner: builds the objective, runs, writes <stem>.csv and
// <stem>.json, optionally audits. Returns a process exit code
// (0 ok, 2 config, 3 parse, 4 divergence, 5 audit failure).
int run_experiment(const ExperimentConfig& cfg);

struct TraceAuditReport {
  bool schema_ok = false;
  bool counters_monotone = false;
  bool potential_ok = true;    // only checked for the MS accelerations
  bool growth_ok = true;       // only checked for the bisection-free loop
  bool down_sum_ok = true;
  bool counter_bound_ok = true;  // per-call linear-solve bound (aMSN only)
  bool ms_certificates_ok = true;
  bool rerun_matches = true;
  double worst_potential_slack = 0.0;
  double worst_ms_slack = 0.0;
  std::int64_t first_bad_row = -1;
  std::string detail;

  bool all_ok() const {
    return schema_ok && counters_monotone && potential_ok && growth_ok &&
           down_sum_ok && counter_bound_ok && ms_certificates_ok &&
           rerun_matches;
  }
};

// Audits <stem>.csv against <stem>.json: schema, counter monotonicity, the
// potential and growth inequalities recomputed from the rows, the per-call
// linear-solve bound 2 + 2 log2(1 + |log2(lambda/lambda')|) for aMSN rows
// away from the floor (the first call is measured against the configured
// lambda0, which was its actual query), per-call MS certificates from a
// deterministic re-run, and byte equality of the regenerated numeric
// columns.
TraceAuditReport audit_trace(const std::string& csv_path);

int exit_code_for(ErrorKind kind);

// Serializes config + outcome to the JSON summary written next to the CSV.
std::string summary_json(const ExperimentConfig& cfg,
                         const BuiltObjective& built,
                         const ExperimentOutput& out,
                         const std::optional<TraceAuditReport>& audit);

std::string method_name(Method m);
Method method_from_name(const std::string& name);
std::string oracle_name(ExperimentConfig::Oracle o);
ExperimentConfig::Oracle oracle_from_name(const std::string& name);

}  // namespace msaccel
