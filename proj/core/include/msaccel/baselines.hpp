#pragma once

#include "msaccel/accel.hpp"

namespace msaccel {

enum class Method {
  optms,          // bisection-free MS acceleration
  msbis,          // classical MS with bracketing bisection
  cr,             // iterate the cubic-regularized step
  acr,            // accelerated cubic regularization
  newton,
  gd,
  agd,
  song,           // pre-specified lambda' schedule fed into the MS update
  iterate_amsn,
  iterate_amsn_fo,
};

struct MethodConfig {
  Method method = Method::newton;
  double eta = 0.0;          // GD / AGD step size (0 = pick from the grid)
  double m_param = 0.0;      // M for CR/ACR, 2H for SONG's oracle
  double h_estimate = 0.0;   // H for SONG's schedule
  double r_estimate = 0.0;   // R for SONG (0 = estimate from Newton steps)
  double lambda1 = 0.1;      // initial lambda for the iterate-oracle schemes
  double sigma = 0.5;        // MS factor for the iterate-oracle schemes
};

// Step-size grid used when eta is not supplied, mirroring the tuning
// protocol for GD/AGD: pick the grid value with the lowest final value and
// warn (extending once) if an edge wins.
std::vector<double> gd_eta_grid();

// Runs the selected baseline. CR iterates x <- O_cr(x; M). NEWTON solves
// (H + 1e-10 I) w = -g each step. GD is x <- x - eta grad f(x); AGD the
// two-sequence momentum recursion with theta_{k+1} =
// (1 + sqrt(1 + 4 theta_k^2))/2. SONG feeds A_t = (t/3)^{7/2} / (2 H R),
// lambda'_{t+1} = A_{t+1} / (A_{t+1} - A_t)^2 into the standard MS update
// with no validity check. Non-finite iterates raise a divergence Error; rows
// already appended to the result stay valid.
RunResult baseline_run(const Objective& obj, const Vector& x0,
                       const MethodConfig& cfg, const RunBudget& budget,
                       const std::optional<Reference>& reference);

// x_{t+1}, lambda_{t+1} = O(x_t; lambda_t / 2) with lambda_1 seeding the
// halving. aMSN runs non-lazily, aMSN-fo lazily.
RunResult iterate_oracle_run(const Objective& obj, const Vector& x0,
                             bool use_first_order, double lambda1,
                             double sigma, const RunBudget& budget,
                             const std::optional<Reference>& reference);

}  // namespace msaccel
