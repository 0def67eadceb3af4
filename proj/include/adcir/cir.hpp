#pragma once

// Univariate square-root (CIR) short-rate process: parameters, transition
// law, stationary Gamma law, exact sampling, and the boundary classification
// of the origin.

#include "adcir/rng.hpp"

namespace adcir {

struct CirParams {
  double kappa = 0.0;  // mean-reversion speed, 1/years
  double theta = 0.0;  // long-run level
  double sigma = 0.0;  // volatility scale
  double x0 = 0.0;     // level at the valuation date

  // Gamma shape of the stationary law.
  double nu() const { return 2.0 * kappa * theta / (sigma * sigma); }
  // Gamma rate of the stationary law.
  double omega() const { return nu() / theta; }
  // Gamma scale, 1/omega = theta/nu.
  double stationary_scale() const { return theta / nu(); }

  // Throws std::invalid_argument unless all four fields are finite and
  // strictly positive (which makes nu and omega finite and positive too).
  void validate() const;
};

// Constants of the transition law at horizon t:
//   c = 2 kappa / (sigma^2 (1 - e^{-kappa t})),  u = c x0 e^{-kappa t}.
struct TransitionCoeffs {
  double c = 0.0;
  double u = 0.0;
  double nu = 0.0;
};

TransitionCoeffs transition_coeffs(const CirParams& p, double t);

// Density of X_t at x given X_0 = p.x0. Defined for x > 0; at x = 0 it
// returns the boundary limit when nu >= 1 and throws std::domain_error for
// nu < 1 (integrable singularity).
double transition_density(const CirParams& p, double t, double x);

// P[X_t <= x | X_0 = p.x0], the rescaled noncentral chi-square CDF.
double transition_cdf(const CirParams& p, double t, double x);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Stationary Gamma(nu, omega) moments: mean theta, variance theta sigma^2 / (2 kappa).
Moments stationary_moments(const CirParams& p);

double stationary_density(const CirParams& p, double x);
double stationary_cdf(const CirParams& p, double x);

// Conditional mean and variance of X_{t+dt} given X_t = x_from.
Moments conditional_moments(const CirParams& p, double x_from, double dt);

// One exact draw from the transition law over dt, starting at x_from:
// K ~ Poisson(u), then Gamma(nu + K, 1), scaled by 1/c.
double sample_exact(const CirParams& p, double x_from, double dt,
                    RandomStream& rng);

// True iff the origin is reachable with positive probability, i.e. nu < 1.
bool feller_hits_origin(const CirParams& p);

}  // namespace adcir
