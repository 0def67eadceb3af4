#include "adcir/cir.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "adcir/special_functions.hpp"

namespace adcir {

void CirParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(kappa) || !positive(theta) || !positive(sigma) || !positive(x0)) {
    throw std::invalid_argument(
        "CirParams: kappa, theta, sigma, x0 must be finite and > 0");
  }
  if (!std::isfinite(nu()) || !std::isfinite(omega())) {
    throw std::invalid_argument("CirParams: derived nu/omega not finite");
  }
}

TransitionCoeffs transition_coeffs(const CirParams& p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("transition_coeffs: t must be > 0");
  const double em = std::exp(-p.kappa * t);
  // -expm1 evaluates 1 - e^{-kappa t} without cancellation for kappa t -> 0,
  // where it equals kappa t (1 - kappa t / 2 + ...) to machine precision.
  const double one_minus_em = -std::expm1(-p.kappa * t);
  TransitionCoeffs k;
  k.c = 2.0 * p.kappa / (p.sigma * p.sigma * one_minus_em);
  k.u = k.c * p.x0 * em;
  k.nu = p.nu();
  return k;
}

double transition_density(const CirParams& p, double t, double x) {
  if (x < 0.0) throw std::invalid_argument("transition_density: x must be >= 0");
  const TransitionCoeffs k = transition_coeffs(p, t);
  if (x == 0.0) {
    if (k.nu > 1.0) return 0.0;
    if (k.nu == 1.0) return k.c * std::exp(-k.u);
    throw std::domain_error(
        "transition_density: singular at x = 0 for nu < 1; use transition_cdf");
  }
  const double v = k.c * x;
  if (k.u < 1e-300) {
    // Long-horizon limit: Gamma(nu) density in v = c x.
    const double logp = std::log(k.c) + (k.nu - 1.0) * std::log(v) - v -
                        std::lgamma(k.nu);
    return std::exp(logp);
  }
  const double logp = std::log(k.c) - (k.u + v) +
                      0.5 * (k.nu - 1.0) * (std::log(v) - std::log(k.u)) +
                      log_bessel_i(k.nu - 1.0, 2.0 * std::sqrt(k.u * v));
  return std::exp(logp);
}

double transition_cdf(const CirParams& p, double t, double x) {
  if (x < 0.0) throw std::invalid_argument("transition_cdf: x must be >= 0");
  const TransitionCoeffs k = transition_coeffs(p, t);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return noncentral_chi_square_cdf(2.0 * k.c * x, 2.0 * k.nu, 2.0 * k.u);
}

Moments stationary_moments(const CirParams& p) {
  Moments m;
  m.mean = p.theta;
  m.variance = p.theta * p.sigma * p.sigma / (2.0 * p.kappa);
  return m;
}

double stationary_density(const CirParams& p, double x) {
  return gamma_pdf(x, p.nu(), p.omega());
}

double stationary_cdf(const CirParams& p, double x) {
  return gamma_cdf(x, p.nu(), p.omega());
}

Moments conditional_moments(const CirParams& p, double x_from, double dt) {
  if (x_from < 0.0) throw std::invalid_argument("conditional_moments: x_from must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("conditional_moments: dt must be > 0");
  const double em = std::exp(-p.kappa * dt);
  const double one_minus_em = -std::expm1(-p.kappa * dt);
  Moments m;
  m.mean = x_from * em + p.theta * one_minus_em;
  const double s2k = p.sigma * p.sigma / p.kappa;
  m.variance = x_from * s2k * (em - em * em) +
               0.5 * p.theta * s2k * one_minus_em * one_minus_em;
  return m;
}

double sample_exact(const CirParams& p, double x_from, double dt,
                    RandomStream& rng) {
  if (x_from < 0.0) throw std::invalid_argument("sample_exact: x_from must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_exact: dt must be > 0");
  const double em = std::exp(-p.kappa * dt);
  const double one_minus_em = -std::expm1(-p.kappa * dt);
  const double c = 2.0 * p.kappa / (p.sigma * p.sigma * one_minus_em);
  const double u = c * x_from * em;
  const std::uint64_t k = rng.next_poisson(u);
  const double g = rng.next_gamma(p.nu() + static_cast<double>(k));
  return g / c;
}

bool feller_hits_origin(const CirParams& p) { return p.nu() < 1.0; }

}  // namespace adcir
