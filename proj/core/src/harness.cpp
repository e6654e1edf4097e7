#include "msaccel/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "msaccel/linalg.hpp"
#include "msaccel/trace_io.hpp"

namespace msaccel {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double parse_kv_number(const std::string& body, const std::string& key,
                       bool required, double fallback) {
  std::istringstream parts(body);
  std::string item;
  while (std::getline(parts, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config, "bad objective spec item '" + item + "'");
    if (item.substr(0, eq) == key) {
      try {
        return std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::config, "bad value for '" + key + "'");
      }
    }
  }
  if (required)
    throw Error(ErrorKind::config, "objective spec is missing '" + key + "'");
  return fallback;
}

}  // namespace

std::string ObjectiveSpec::canonical() const {
  switch (kind) {
    case Kind::libsvm:
      return "libsvm:" + path;
    case Kind::synthetic:
      return "synthetic:n=" + std::to_string(n) + ",d=" + std::to_string(d) +
             ",seed=" + std::to_string(seed);
    case Kind::worst_case:
      return "worstcase:d=" + std::to_string(d);
    case Kind::quadratic:
      return "quadratic:d=" + std::to_string(d);
  }
  return {};
}

ObjectiveSpec parse_objective_spec(const std::string& text,
                                   std::uint64_t default_seed) {
  ObjectiveSpec spec;
  auto starts = [&](const char* prefix) {
    return text.rfind(prefix, 0) == 0;
  };
  if (starts("synthetic:")) {
    const std::string body = text.substr(10);
    spec.kind = ObjectiveSpec::Kind::synthetic;
    spec.n = static_cast<int>(parse_kv_number(body, "n", true, 0));
    spec.d = static_cast<int>(parse_kv_number(body, "d", true, 0));
    spec.seed = static_cast<std::uint64_t>(parse_kv_number(
        body, "seed", false, static_cast<double>(default_seed)));
    if (spec.n <= 0 || spec.n % 2 != 0 || spec.d < 1)
      throw Error(ErrorKind::config,
                  "synthetic spec needs even n > 0 and d >= 1");
  } else if (starts("worstcase:")) {
    spec.kind = ObjectiveSpec::Kind::worst_case;
    spec.d = static_cast<int>(parse_kv_number(text.substr(10), "d", true, 0));
    if (spec.d < 1) throw Error(ErrorKind::config, "worstcase needs d >= 1");
  } else if (starts("quadratic:")) {
    spec.kind = ObjectiveSpec::Kind::quadratic;
    spec.d = static_cast<int>(parse_kv_number(text.substr(10), "d", true, 0));
    if (spec.d < 1) throw Error(ErrorKind::config, "quadratic needs d >= 1");
  } else {
    spec.kind = ObjectiveSpec::Kind::libsvm;
    spec.path = text;
    if (text.empty()) throw Error(ErrorKind::config, "empty objective spec");
  }
  return spec;
}

Reference newton_reference(const Objective& obj, const Vector& x0,
                           double grad_tol, int max_iters) {
  Vector x = x0;
  double f = obj.value(x);
  for (int it = 0; it < max_iters; ++it) {
    const Vector g = obj.gradient(x);
    if (g.norm() <= grad_tol) break;
    const Vector step = reg_newton_step(obj.hessian(x), g, kLambdaNewton);
    const double slope = g.dot(step);
    // Armijo backtracking keeps the pure Newton step globally safe; the
    // absolute term admits steps whose decrease sits below double resolution
    const double noise = 4.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(f));
    double t = 1.0;
    for (int ls = 0; ls < 80; ++ls) {
      const double f_try = obj.value(x + t * step);
      if (f_try <= f + 1e-4 * t * slope + noise) break;
      t *= 0.5;
      if (ls == 79)
        throw Error(ErrorKind::non_convergence,
                    "reference Newton solve: line search stalled");
    }
    x += t * step;
    f = obj.value(x);
  }
  if (obj.gradient(x).norm() > grad_tol)
    throw Error(ErrorKind::non_convergence,
                "reference Newton solve did not reach the gradient tolerance");
  return Reference{x, f};
}

BuiltObjective build_objective(const ObjectiveSpec& spec) {
  BuiltObjective built;
  std::string cache_key;
  switch (spec.kind) {
    case ObjectiveSpec::Kind::libsvm: {
      const std::string text = read_text_file(spec.path);
      int zero_rows = 0;
      Dataset data = normalize_rows(parse_libsvm(text), &zero_rows);
      if (zero_rows > 0)
        std::fprintf(stderr,
                     "warning: %d zero-norm feature row(s) left unnormalized\n",
                     zero_rows);
      built.hbar = hessian_lipschitz_bound(data);
      built.m_default = 0.2 * built.hbar;
      cache_key = spec.canonical() + "#" + to_hex(fnv1a(text));
      built.objective = make_logistic(std::move(data));
      break;
    }
    case ObjectiveSpec::Kind::synthetic: {
      Dataset data = synthetic_gaussian(spec.n, spec.d, spec.seed);
      built.hbar = hessian_lipschitz_bound(data);
      built.m_default = 0.2 * built.hbar;
      cache_key = spec.canonical();
      built.objective = make_logistic(std::move(data));
      break;
    }
    case ObjectiveSpec::Kind::worst_case:
      built.objective = make_worst_case(spec.d);
      built.m_default = 20.0;  // H = 10 estimate for the chain
      built.reference = Reference{Vector::Ones(spec.d), 0.0};
      return built;  // exact minimizer, nothing to cache
    case ObjectiveSpec::Kind::quadratic: {
      Matrix q = Matrix::Zero(spec.d, spec.d);
      for (int i = 0; i < spec.d; ++i)
        q(i, i) = static_cast<double>(i + 1) / spec.d;
      built.objective = make_quadratic(std::move(q), Vector::Ones(spec.d));
      built.m_default = 1.0;
      cache_key = spec.canonical();
      break;
    }
  }

  const char* cache_dir = std::getenv("MSACCEL_CACHE");
  std::filesystem::path cache_file;
  if (cache_dir && *cache_dir) {
    std::filesystem::create_directories(cache_dir);
    cache_file = std::filesystem::path(cache_dir) /
                 ("ref_" + to_hex(fnv1a(cache_key)) + ".json");
    if (std::filesystem::exists(cache_file)) {
      try {
        const json j = json::parse(read_text_file(cache_file.string()));
        if (j.at("key").get<std::string>() == cache_key) {
          Reference ref;
          const auto& xs = j.at("x_star");
          ref.x_star.resize(static_cast<Eigen::Index>(xs.size()));
          for (std::size_t i = 0; i < xs.size(); ++i)
            ref.x_star[static_cast<Eigen::Index>(i)] = xs[i].get<double>();
          ref.f_star = j.at("f_star").get<double>();
          built.reference = ref;
          return built;
        }
      } catch (const std::exception&) {
        // unreadable cache entries are recomputed below
      }
    }
  }

  built.reference = newton_reference(
      *built.objective, Vector::Zero(built.objective->dim()), 1e-13);

  if (!cache_file.empty()) {
    json j;
    j["key"] = cache_key;
    j["f_star"] = built.reference.f_star;
    j["x_star"] = std::vector<double>(
        built.reference.x_star.data(),
        built.reference.x_star.data() + built.reference.x_star.size());
    write_text_file(cache_file.string(), j.dump());
  }
  return built;
}

namespace {

struct SlackTracker {
  double worst = -std::numeric_limits<double>::infinity();
  std::int64_t floor_hits = 0;

  void observe(const OracleResult& res, double sigma) {
    const double allowed =
        sigma * res.step_norm + 1e-9 * (1.0 + res.step_norm);
    worst = std::max(worst, res.ms_residual - allowed);
    if (res.floor_hit) ++floor_hits;
  }
};

MsOracleFn make_oracle(const ExperimentConfig& cfg, const BuiltObjective& built,
                       double m_param, SlackTracker& tracker) {
  const Objective* obj = built.objective.get();
  const double sigma = cfg.sigma;
  const bool msbis = cfg.method == Method::msbis;
  const bool lazy_cfg = cfg.lazy;
  switch (cfg.oracle) {
    case ExperimentConfig::Oracle::amsn:
      return [obj, sigma, msbis, lazy_cfg, &tracker](const Vector& y,
                                                     double lambda_prime,
                                                     bool first) {
        // the bisection loop wants the non-lazy oracle; the bisection-free
        // loop runs lazily in all but the first call
        const bool lazy = msbis ? false : (lazy_cfg && !first);
        OracleResult res = amsn(*obj, y, lambda_prime, sigma, lazy);
        tracker.observe(res, sigma);
        return res;
      };
    case ExperimentConfig::Oracle::amsn_fo:
      return [obj, sigma, &tracker](const Vector& y, double lambda_prime,
                                    bool) {
        OracleResult res = amsn_fo(*obj, y, lambda_prime, sigma);
        tracker.observe(res, sigma);
        return res;
      };
    case ExperimentConfig::Oracle::cr:
      return [obj, m_param, sigma, &tracker](const Vector& y, double, bool) {
        OracleResult res = cr_oracle(*obj, y, m_param);
        tracker.observe(res, sigma);
        return res;
      };
    case ExperimentConfig::Oracle::gd: {
      const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0;
      return [obj, eta, sigma, &tracker](const Vector& y, double, bool) {
        OracleResult res = gd_oracle(*obj, y, eta);
        finalize_certificate(*obj, y, res);
        tracker.observe(res, sigma);
        return res;
      };
    }
  }
  throw Error(ErrorKind::config, "unknown oracle");
}

double row_gap(const TraceRecord& row) {
  return std::isfinite(row.gap) ? std::max(row.gap, 0.0) : row.gap;
}

}  // namespace

namespace {

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.alpha > 1.0))
    throw Error(ErrorKind::config, "alpha must be > 1");
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0))
    throw Error(ErrorKind::config, "sigma must be in (0, 1)");
  if (!(cfg.lambda0 > 0.0))
    throw Error(ErrorKind::config, "lambda0 must be > 0");
  if (!(cfg.rho > 1.0)) throw Error(ErrorKind::config, "rho must be > 1");
  if (cfg.eta < 0.0) throw Error(ErrorKind::config, "eta must be >= 0");
  if (cfg.m_param < 0.0) throw Error(ErrorKind::config, "M must be >= 0");
  if (cfg.budget.max_oracle_calls < 1)
    throw Error(ErrorKind::config, "budget-calls must be >= 1");
}

}  // namespace

ExperimentOutput run_configured(const ExperimentConfig& cfg,
                                const BuiltObjective& built) {
  validate_config(cfg);
  const double m_param = cfg.m_param > 0.0 ? cfg.m_param : built.m_default;
  const Vector x0 = Vector::Zero(built.objective->dim());
  const std::optional<Reference> ref = built.reference;

  ExperimentOutput out;
  SlackTracker tracker;
  try {
    switch (cfg.method) {
      case Method::optms: {
        OptimalMsOptions opt;
        opt.alpha = cfg.alpha;
        opt.lambda0 = cfg.lambda0;
        opt.damping = cfg.damping;
        out.run = optimal_ms_run(*built.objective, x0,
                                 make_oracle(cfg, built, m_param, tracker), opt,
                                 cfg.budget, ref);
        break;
      }
      case Method::msbis: {
        MsBisectionOptions opt;
        opt.rho = cfg.rho;
        opt.lambda0 = cfg.lambda0;
        out.run = ms_bisection_run(*built.objective, x0,
                                   make_oracle(cfg, built, m_param, tracker),
                                   opt, cfg.budget, ref);
        break;
      }
      default: {
        MethodConfig mc;
        mc.method = cfg.method;
        mc.eta = cfg.eta;
        mc.m_param = m_param;
        mc.h_estimate = 0.5 * m_param;
        mc.lambda1 = cfg.lambda0;
        mc.sigma = cfg.sigma;
        out.run = baseline_run(*built.objective, x0, mc, cfg.budget, ref);
        break;
      }
    }
  } catch (const RunError& e) {
    out.diverged = true;
    out.divergence_message = e.what();
    out.run.trace = e.partial_trace;
    if (!out.run.trace.empty()) {
      out.final_gap = row_gap(out.run.trace.back());
      out.best_gap = out.final_gap;
    }
    out.worst_ms_slack = std::isfinite(tracker.worst)
                             ? tracker.worst
                             : std::numeric_limits<double>::quiet_NaN();
    out.floor_hits = tracker.floor_hits;
    return out;
  }

  // -inf means the method never went through an MS oracle
  out.worst_ms_slack = std::isfinite(tracker.worst)
                           ? tracker.worst
                           : std::numeric_limits<double>::quiet_NaN();
  out.floor_hits = tracker.floor_hits;
  out.final_gap = row_gap(out.run.trace.back());
  out.best_gap = ref ? std::max(out.run.best_f - ref->f_star, 0.0)
                     : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::optms: return "OPTMS";
    case Method::msbis: return "MSBIS";
    case Method::cr: return "CR";
    case Method::acr: return "ACR";
    case Method::newton: return "NEWTON";
    case Method::gd: return "GD";
    case Method::agd: return "AGD";
    case Method::song: return "SONG";
    case Method::iterate_amsn: return "ITERATE_AMSN";
    case Method::iterate_amsn_fo: return "ITERATE_AMSN_FO";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::optms, Method::msbis, Method::cr, Method::acr,
                   Method::newton, Method::gd, Method::agd, Method::song,
                   Method::iterate_amsn, Method::iterate_amsn_fo})
    if (method_name(m) == name) return m;
  throw Error(ErrorKind::config, "unknown method '" + name + "'");
}

std::string oracle_name(ExperimentConfig::Oracle o) {
  switch (o) {
    case ExperimentConfig::Oracle::amsn: return "AMSN";
    case ExperimentConfig::Oracle::amsn_fo: return "AMSN_FO";
    case ExperimentConfig::Oracle::cr: return "CR";
    case ExperimentConfig::Oracle::gd: return "GD";
  }
  return "?";
}

ExperimentConfig::Oracle oracle_from_name(const std::string& name) {
  for (auto o : {ExperimentConfig::Oracle::amsn, ExperimentConfig::Oracle::amsn_fo,
                 ExperimentConfig::Oracle::cr, ExperimentConfig::Oracle::gd})
    if (oracle_name(o) == name) return o;
  throw Error(ErrorKind::config, "unknown oracle '" + name + "'");
}

std::string summary_json(const ExperimentConfig& cfg,
                         const BuiltObjective& built,
                         const ExperimentOutput& out,
                         const std::optional<TraceAuditReport>& audit) {
  json j;
  j["schema"] = kTraceSchemaVersion;
  json c;
  c["objective"] = cfg.objective.canonical();
  c["method"] = method_name(cfg.method);
  c["oracle"] = oracle_name(cfg.oracle);
  c["alpha"] = cfg.alpha;
  c["sigma"] = cfg.sigma;
  c["lambda0"] = cfg.lambda0;
  c["eta"] = cfg.eta;
  c["M"] = cfg.m_param;
  c["rho"] = cfg.rho;
  c["damping"] = cfg.damping;
  c["lazy"] = cfg.lazy;
  c["budget_calls"] = cfg.budget.max_oracle_calls;
  c["budget_seconds"] = cfg.budget.max_seconds;
  c["target_gap"] = cfg.budget.target_gap;
  c["seed"] = cfg.seed;
  j["config"] = c;

  json o;
  o["diverged"] = out.diverged;
  if (out.diverged) o["divergence_message"] = out.divergence_message;
  o["final_gap"] = out.final_gap;
  o["best_gap"] = out.best_gap;
  o["oracle_calls"] = out.run.oracle_calls;
  o["floor_hits"] = out.floor_hits;
  o["worst_ms_slack"] = out.worst_ms_slack;
  o["hbar"] = built.hbar;
  o["m_effective"] = cfg.m_param > 0.0 ? cfg.m_param : built.m_default;
  o["f_star"] = built.reference.f_star;
  json cnt;
  cnt["hess_evals"] = out.run.totals.hessian_evals;
  cnt["lin_solves"] = out.run.totals.linear_solves;
  cnt["hvps"] = out.run.totals.hvps;
  cnt["grad_evals"] = out.run.totals.gradient_evals;
  o["counters"] = cnt;
  if (!out.run.trace.empty()) o["wall_ms"] = out.run.trace.back().wall_ms;
  j["outcome"] = o;

  if (audit) {
    json a;
    a["pass"] = audit->all_ok();
    a["schema_ok"] = audit->schema_ok;
    a["counters_monotone"] = audit->counters_monotone;
    a["potential_ok"] = audit->potential_ok;
    a["growth_ok"] = audit->growth_ok;
    a["down_sum_ok"] = audit->down_sum_ok;
    a["counter_bound_ok"] = audit->counter_bound_ok;
    a["ms_certificates_ok"] = audit->ms_certificates_ok;
    a["rerun_matches"] = audit->rerun_matches;
    a["worst_potential_slack"] = audit->worst_potential_slack;
    a["worst_ms_slack"] = audit->worst_ms_slack;
    a["detail"] = audit->detail;
    j["audit"] = a;
  }
  return j.dump(2) + "\n";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
      return 3;
    case ErrorKind::divergence:
    case ErrorKind::iteration_budget:
    case ErrorKind::non_convergence:
    case ErrorKind::bisection_failure:
      return 4;
    case ErrorKind::audit_input:
    case ErrorKind::audit_failure:
      return 5;
    case ErrorKind::invalid_input:
    case ErrorKind::config:
    default:
      return 2;
  }
}

namespace {

ExperimentConfig config_from_json(const json& c) {
  ExperimentConfig cfg;
  cfg.seed = c.at("seed").get<std::uint64_t>();
  cfg.objective =
      parse_objective_spec(c.at("objective").get<std::string>(), cfg.seed);
  cfg.method = method_from_name(c.at("method").get<std::string>());
  cfg.oracle = oracle_from_name(c.at("oracle").get<std::string>());
  cfg.alpha = c.at("alpha").get<double>();
  cfg.sigma = c.at("sigma").get<double>();
  cfg.lambda0 = c.at("lambda0").get<double>();
  cfg.eta = c.at("eta").get<double>();
  cfg.m_param = c.at("M").get<double>();
  cfg.rho = c.at("rho").get<double>();
  cfg.damping = c.at("damping").get<bool>();
  cfg.lazy = c.at("lazy").get<bool>();
  cfg.budget.max_oracle_calls = c.at("budget_calls").get<std::int64_t>();
  cfg.budget.max_seconds = c.at("budget_seconds").get<double>();
  cfg.budget.target_gap = c.at("target_gap").get<double>();
  return cfg;
}

std::string strip_wall_column(const std::string& line) {
  const auto pos = line.rfind(',');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

TraceAuditReport audit_trace(const std::string& csv_path) {
  TraceAuditReport report;
  const std::string csv_text = read_text_file(csv_path);
  const std::vector<TraceRecord> trace = trace_from_csv(csv_text);
  report.schema_ok = true;
  if (trace.empty() || trace.front().t != 0)
    throw Error(ErrorKind::audit_input, "trace must begin with a t = 0 row");

  std::filesystem::path summary_path(csv_path);
  summary_path.replace_extension(".json");
  json summary;
  try {
    summary = json::parse(read_text_file(summary_path.string()));
  } catch (const std::exception& e) {
    throw Error(ErrorKind::audit_input,
                "cannot read summary sidecar " + summary_path.string() + ": " +
                    e.what());
  }
  if (summary.value("schema", "") != kTraceSchemaVersion)
    throw Error(ErrorKind::audit_input, "summary schema version mismatch");
  const ExperimentConfig cfg = config_from_json(summary.at("config"));

  report.counters_monotone = true;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const auto& a = trace[i - 1].counters;
    const auto& b = trace[i].counters;
    if (b.hessian_evals < a.hessian_evals ||
        b.linear_solves < a.linear_solves || b.hvps < a.hvps ||
        b.gradient_evals < a.gradient_evals) {
      report.counters_monotone = false;
      report.detail = "counters decrease at t = " + std::to_string(trace[i].t);
    }
  }

  const bool ms_method = cfg.method == Method::optms || cfg.method == Method::msbis;
  if (ms_method) {
    PotentialAuditReport pot = audit_potential(
        trace, cfg.sigma, cfg.alpha, cfg.method == Method::optms);
    report.potential_ok = pot.potential_ok;
    report.growth_ok = pot.growth_ok;
    report.down_sum_ok = pot.down_sum_ok;
    report.worst_potential_slack = pot.worst_potential_slack;
    if (!pot.potential_ok) {
      report.first_bad_row = pot.first_bad_row;
      report.detail = pot.detail;
    }
  }

  if (cfg.method == Method::optms &&
      cfg.oracle == ExperimentConfig::Oracle::amsn) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const auto& row = trace[i];
      if (row.lambda <= kLambdaNewton * (1.0 + 1e-6)) continue;  // floor hit
      // the first call queried the configured lambda0; afterwards the row's
      // lambda' is the query itself
      const double query = row.t == 1 ? cfg.lambda0 : row.lambda_prime;
      const double bound =
          2.0 + 2.0 * std::log2(1.0 + std::abs(std::log2(row.lambda / query)));
      const std::int64_t solves =
          row.counters.linear_solves - trace[i - 1].counters.linear_solves;
      if (solves > static_cast<std::int64_t>(std::ceil(bound - 1e-12))) {
        report.counter_bound_ok = false;
        report.detail = "linear-solve bound broken at t = " +
                        std::to_string(row.t) + " (" + std::to_string(solves) +
                        " > ceil(" + format_double(bound) + "))";
        break;
      }
    }
  }

  // deterministic re-run: certificates are checked live and the regenerated
  // numeric columns must match byte for byte (wall_ms excluded)
  const BuiltObjective built = build_objective(cfg.objective);
  const ExperimentOutput fresh = run_configured(cfg, built);
  report.worst_ms_slack = fresh.worst_ms_slack;
  if (ms_method && std::isfinite(fresh.worst_ms_slack) &&
      fresh.worst_ms_slack > 0.0) {
    report.ms_certificates_ok = false;
    report.detail = "an oracle call violated its MS certificate";
  }
  {
    std::istringstream got(csv_text);
    std::istringstream want(trace_to_csv(fresh.run.trace));
    std::string a, b;
    std::int64_t line = 0;
    while (true) {
      const bool ga = static_cast<bool>(std::getline(got, a));
      const bool gb = static_cast<bool>(std::getline(want, b));
      if (!ga && !gb) break;
      ++line;
      if (ga != gb || strip_wall_column(a) != strip_wall_column(b)) {
        report.rerun_matches = false;
        report.detail = "re-run diverges from the trace at line " +
                        std::to_string(line);
        break;
      }
    }
  }
  return report;
}

int run_experiment(const ExperimentConfig& cfg) {
  BuiltObjective built;
  try {
    built = build_objective(cfg.objective);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  }

  ExperimentOutput out = run_configured(cfg, built);
  const std::string csv_path = cfg.out_stem + ".csv";
  const std::string json_path = cfg.out_stem + ".json";
  write_text_file(csv_path, trace_to_csv(out.run.trace));

  std::optional<TraceAuditReport> audit;
  write_text_file(json_path, summary_json(cfg, built, out, audit));
  if (out.diverged) {
    std::fprintf(stderr, "error: %s (partial trace flushed to %s)\n",
                 out.divergence_message.c_str(), csv_path.c_str());
    return 4;
  }

  if (cfg.audit) {
    try {
      audit = audit_trace(csv_path);
    } catch (const Error& e) {
      std::fprintf(stderr, "audit error: %s\n", e.what());
      return exit_code_for(e.kind());
    }
    write_text_file(json_path, summary_json(cfg, built, out, audit));
    std::printf("audit: potential %s, growth %s, counter bound %s, "
                "certificates %s, rerun %s (worst potential slack %s)\n",
                audit->potential_ok ? "pass" : "FAIL",
                audit->growth_ok ? "pass" : "FAIL",
                audit->counter_bound_ok ? "pass" : "FAIL",
                audit->ms_certificates_ok ? "pass" : "FAIL",
                audit->rerun_matches ? "pass" : "FAIL",
                format_double(audit->worst_potential_slack).c_str());
    if (!audit->all_ok()) return 5;
  }

  std::printf("%s %s: final gap %s, best gap %s, %lld oracle calls\n",
              method_name(cfg.method).c_str(),
              cfg.objective.canonical().c_str(),
              format_double(out.final_gap).c_str(),
              format_double(out.best_gap).c_str(),
              static_cast<long long>(out.run.oracle_calls));
  return 0;
}

}  // namespace msaccel
