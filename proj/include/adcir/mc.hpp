#pragma once

// Euler-Maruyama simulation with full truncation, Monte Carlo zero-coupon
// pricing with Simpson-rule discounting, origin-hitting estimation, and
// empirical distribution extraction. Path simulation is parallel across
// paths; every variate is addressed by (seed, path, step), so results do
// not depend on the number of worker threads.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "adcir/adc.hpp"
#include "adcir/pricing.hpp"
#include "adcir/stats.hpp"

namespace adcir {

struct SimConfig {
  double step_h = 0.004;
  std::int64_t n_paths = 5000;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  double boundary_delta = 1e-6;

  // Shrinks step_h minimally (never enlarges it) so the horizon divides
  // into an even number of steps, as the Simpson rule requires.
  SimConfig normalized() const;
  std::int64_t n_steps() const;  // steps of the normalized config
};

struct UnivariateModel {
  CirParams p;
};

struct IndependentPair {  // model 1
  CirParams r;
  CirParams s;
};

using SimModel = std::variant<UnivariateModel, IndependentPair, AdcParams>;

struct PathBatch {
  std::vector<double> times;         // n_steps + 1 instants
  std::vector<StateVector> states;   // n_paths x (n_steps + 1), path-major
  std::vector<std::uint8_t> hit_flags;
  std::uint64_t seed = 0;
  std::int64_t n_paths = 0;
  std::int64_t n_instants = 0;

  StateVector at(std::int64_t path, std::int64_t instant) const {
    return states[static_cast<std::size_t>(path * n_instants + instant)];
  }
};

PathBatch simulate(const SimModel& model, const SimConfig& cfg);

struct McPrice {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
};

// Per path, Simpson-integrate r (risk_free) or r+s (risky) to T and average
// exp(-integral). T must land on an even grid index of the normalized step.
McPrice price_zcb_mc(const SimModel& model, const SimConfig& cfg, double T,
                     Leg leg);
std::vector<McPrice> price_zcb_mc_curve(const SimModel& model,
                                        const SimConfig& cfg,
                                        const std::vector<double>& tenors,
                                        Leg leg);

// Both legs from one path sweep (identical paths for the two discount
// integrands).
struct McCurvePair {
  std::vector<McPrice> risk_free;
  std::vector<McPrice> risky;
};
McCurvePair price_zcb_mc_curve_both(const SimModel& model,
                                    const SimConfig& cfg,
                                    const std::vector<double>& tenors);

struct HitEstimate {
  double probability = 0.0;
  double std_error = 0.0;  // binomial
  std::int64_t hits = 0;
  std::int64_t n_paths = 0;
};

// Fraction of paths whose state ever falls below boundary_delta, in all
// components simultaneously for multivariate models.
HitEstimate hitting_probability(const SimModel& model, const SimConfig& cfg);

enum class Component { r, s, joint };

Histogram1D empirical_distribution(const PathBatch& batch, double t,
                                   Component component);
Histogram2D empirical_distribution_joint(const PathBatch& batch, double t);

// Streaming terminal-state extraction; memory stays O(n_paths) regardless
// of the step count. Initial states may be supplied per path (size n_paths),
// otherwise the model's x0 is used for every path.
std::vector<StateVector> terminal_states(
    const SimModel& model, const SimConfig& cfg,
    const std::vector<StateVector>* initial_states = nullptr);

struct ComparisonReport {
  double ks_distance = 0.0;
  double ks_critical = 0.0;
  double alpha = 0.0;
  std::int64_t n_paths = 0;
  double t = 0.0;
  bool pass() const { return ks_distance < ks_critical; }
};

// Simulates n independent equal-kappa factors, forms Z = sum_i X_i/sigma_i^2
// at the horizon and compares its empirical law against the univariate
// transition law with (kappa, theta = nu/(2 kappa), sigma = 1).
ComparisonReport comparison_sum_check(const std::vector<CirParams>& factors,
                                      const SimConfig& cfg,
                                      double alpha = 0.01);

}  // namespace adcir
