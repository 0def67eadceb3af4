#pragma once

// Calibration to observed term structures: the deterministic two-step fit
// of the independent two-factor model (closed-form objective) and the
// simulated-annealing fit of the correlated model (Monte Carlo objective
// with common random numbers).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adcir/adc.hpp"
#include "adcir/curve.hpp"
#include "adcir/io.hpp"
#include "adcir/mc.hpp"

namespace adcir {

struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct CirBounds {
  ParamBounds kappa{1e-3, 8.0};
  ParamBounds theta{1e-4, 0.25};
  ParamBounds sigma{2e-3, 0.6};
  ParamBounds x0{1e-6, 0.2};
};

struct SaSchedule {
  double initial_temperature = -1.0;  // <= 0: start at the initial objective
  double decay = 0.95;
  int steps_per_stage = 50;
  int reanneal_after_stale_stages = 5;
  double reanneal_factor = 0.1;  // reheat to T0 * factor
  double proposal_width = 0.25;  // in units of (hi - lo), annealed by T/T0
  long max_evaluations = 20000;  // Monte Carlo objective calls, polish included
};

struct Convergence {
  double objective_tol = 1e-20;
  long max_evaluations = 500000;  // closed-form objective calls
};

struct CalibrationConfig {
  CirBounds rf_bounds;
  CirBounds spread_bounds;
  ParamBounds eps_r{0.0, 1.0};
  ParamBounds eps_s{0.0, 1.0};
  ParamBounds rho{-1.0, 1.0};  // gamma = rho * sqrt(eps_r * eps_s)
  SaSchedule sa;
  SimConfig mc_cfg{0.004, 5000, 30.0, 1, 1e-6};
  double weight_rates = 1.0;
  double weight_spreads = 1.0;
  Convergence convergence;
  std::uint64_t seed = 0;
  int multistart = 16;

  void validate() const;
  static CalibrationConfig from_key_values(const KeyValueMap& kv);
};

struct TraceEntry {
  long evaluation = 0;
  double temperature = 0.0;
  double objective = 0.0;
  bool accepted = false;
  bool improved_best = false;
};

struct CurvatureDiagnostic {
  std::string name;
  double curvature = 0.0;
  bool flat = false;  // curvature below 1e-6
};

struct CalibrationReport {
  AdcParams params;  // x0 fields carry the fitted r0/s0
  double objective = 0.0;
  std::vector<double> residual_rates_bp;    // fitted - observed, tau = 1..30
  std::vector<double> residual_spreads_bp;  // fitted - observed, tau = 1..30
  long evaluations = 0;
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;
  std::vector<CurvatureDiagnostic> curvature;
  bool converged = false;
};

// Sum of squared differences between model and observed zero rates plus
// model and observed spreads, over the curves' common tenor grid.
double objective_model1(const CirParams& pr, const CirParams& ps, double r0,
                        double s0, const YieldCurve& de, const YieldCurve& it,
                        double weight_rates = 1.0, double weight_spreads = 1.0);

// Same quadratic form with the model rates replaced by Monte Carlo prices
// under a fixed seed (common random numbers).
double objective_model2(const AdcParams& p, double r0, double s0,
                        const YieldCurve& de, const YieldCurve& it,
                        const SimConfig& mc_cfg, double weight_rates = 1.0,
                        double weight_spreads = 1.0);

// Step 1 fits (kappa_r, theta_r, sigma_r, r0) to the risk-free curve; step 2
// fits the spread factor to the spread with step-1 parameters frozen. Both
// steps use a multi-start coordinate golden-section search.
CalibrationReport calibrate_model1(const YieldCurve& de, const YieldCurve& it,
                                   const CalibrationConfig& cfg);

// Simulated annealing over the 11-dimensional box (8 CIR parameters plus
// eps_r, eps_s, rho), started from the model-1 fit with zero correlation,
// then polished with the coordinate search. Returns the best point ever
// visited.
CalibrationReport calibrate_model2(const YieldCurve& de, const YieldCurve& it,
                                   const CalibrationConfig& cfg);

void write_report_text(const CalibrationReport& report, std::ostream& out);
void write_fitted_params_csv(const CalibrationReport& report, std::ostream& out,
                             const std::vector<std::string>& comment_lines = {});
void write_residuals_csv(const CalibrationReport& report, std::ostream& out,
                         const std::vector<std::string>& comment_lines = {});

}  // namespace adcir
