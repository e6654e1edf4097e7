#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "msaccel/harness.hpp"
#include "msaccel/trace_io.hpp"

namespace {

int run_command(const std::string& method, const std::string& oracle,
                const std::string& data, msaccel::ExperimentConfig cfg) {
  try {
    cfg.method = msaccel::method_from_name(method);
    cfg.oracle = msaccel::oracle_from_name(oracle);
    cfg.objective = msaccel::parse_objective_spec(data, cfg.seed);
  } catch (const msaccel::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return msaccel::exit_code_for(e.kind());
  }
  try {
    return msaccel::run_experiment(cfg);
  } catch (const msaccel::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return msaccel::exit_code_for(e.kind());
  }
}

int audit_command(const std::string& trace_path) {
  try {
    const msaccel::TraceAuditReport report = msaccel::audit_trace(trace_path);
    std::printf("schema            %s\n", report.schema_ok ? "pass" : "FAIL");
    std::printf("counters monotone %s\n",
                report.counters_monotone ? "pass" : "FAIL");
    std::printf("potential         %s (worst slack %s)\n",
                report.potential_ok ? "pass" : "FAIL",
                msaccel::format_double(report.worst_potential_slack).c_str());
    std::printf("growth bound      %s\n", report.growth_ok ? "pass" : "FAIL");
    std::printf("down-step sum     %s\n", report.down_sum_ok ? "pass" : "FAIL");
    std::printf("counter bound     %s\n",
                report.counter_bound_ok ? "pass" : "FAIL");
    std::printf("MS certificates   %s (worst slack %s)\n",
                report.ms_certificates_ok ? "pass" : "FAIL",
                msaccel::format_double(report.worst_ms_slack).c_str());
    std::printf("re-run match      %s\n",
                report.rerun_matches ? "pass" : "FAIL");
    if (!report.detail.empty())
      std::printf("detail: %s\n", report.detail.c_str());
    if (!report.all_ok()) {
      std::printf("audit: FAIL\n");
      return 5;
    }
    std::printf("audit: pass\n");
    return 0;
  } catch (const msaccel::Error& e) {
    std::fprintf(stderr, "audit error: %s\n", e.what());
    return msaccel::exit_code_for(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monteiro-Svaiter acceleration benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment configuration");
  std::string method = "OPTMS";
  std::string oracle = "AMSN";
  std::string data;
  msaccel::ExperimentConfig cfg;
  run->add_option("--method", method,
                  "OPTMS, MSBIS, CR, ACR, NEWTON, GD, AGD, SONG, "
                  "ITERATE_AMSN, ITERATE_AMSN_FO");
  run->add_option("--oracle", oracle, "AMSN, AMSN_FO, CR, GD (for OPTMS/MSBIS)");
  run->add_option("--data", data,
                  "LIBSVM path, synthetic:n=..,d=..,seed=.., worstcase:d=.., "
                  "or quadratic:d=..")
      ->required();
  run->add_option("--alpha", cfg.alpha, "lambda' adjustment factor (> 1)");
  run->add_option("--sigma", cfg.sigma, "MS approximation factor in (0,1)");
  run->add_option("--lambda0", cfg.lambda0, "initial lambda' guess");
  run->add_option("--eta", cfg.eta, "GD/AGD step size (0 = grid tuned)");
  run->add_option("--M", cfg.m_param,
                  "cubic regularization parameter (0 = objective default)");
  run->add_option("--rho", cfg.rho, "bisection acceptance window factor");
  std::string damping = "on", lazy = "on";
  run->add_option("--damping", damping,
                  "momentum damping on up steps (on|off, default on)")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--lazy", lazy,
                  "lazy aMSN after the first call (on|off, default on)")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--budget-calls", cfg.budget.max_oracle_calls,
                  "stop after this many oracle calls");
  run->add_option("--budget-seconds", cfg.budget.max_seconds,
                  "stop after this much wall time");
  run->add_option("--target-gap", cfg.budget.target_gap,
                  "stop once the gap reaches this value (0 = off)");
  run->add_option("--seed", cfg.seed, "seed for synthetic data");
  run->add_option("--out", cfg.out_stem,
                  "output stem; writes <stem>.csv and <stem>.json");
  run->add_flag("--audit", cfg.audit, "audit the trace after the run");

  auto* audit = app.add_subcommand("audit", "audit an existing trace");
  std::string trace_path;
  audit->add_option("--trace", trace_path, "path to a <stem>.csv trace")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  if (app.got_subcommand(run)) {
    cfg.damping = damping == "on";
    cfg.lazy = lazy == "on";
    return run_command(method, oracle, data, cfg);
  }
  return audit_command(trace_path);
}
