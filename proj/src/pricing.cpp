#include "adcir/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace adcir {

BrownDybvig brown_dybvig(double kappa, double sigma) {
  if (kappa < 0.0 || sigma < 0.0) {
    throw std::invalid_argument("brown_dybvig: kappa and sigma must be >= 0");
  }
  BrownDybvig bd;
  bd.d = std::sqrt(kappa * kappa + 2.0 * sigma * sigma);
  bd.phi = 0.5 * (bd.d + kappa);
  return bd;
}

BrownDybvig brown_dybvig(const CirParams& p) {
  p.validate();
  return brown_dybvig(p.kappa, p.sigma);
}

double zcb_price_cir(const CirParams& p, double r_now, double tau) {
  if (tau < 0.0) throw std::invalid_argument("zcb_price_cir: tau must be >= 0");
  if (tau == 0.0) return 1.0;
  const BrownDybvig bd = brown_dybvig(p.kappa, p.sigma);
  const double m = bd.d * tau;
  double log_denom;  // ln(phi (e^{d tau} - 1) + d)
  double g;
  if (m <= 30.0) {
    const double e = std::expm1(m);
    const double denom = bd.phi * e + bd.d;
    log_denom = std::log(denom);
    g = e / denom;
  } else {
    const double em = std::exp(-m);
    log_denom = m + std::log(bd.phi + (bd.d - bd.phi) * em);
    g = (1.0 - em) / (bd.phi * (1.0 - em) + bd.d * em);
  }
  const double log_f = p.nu() * (std::log(bd.d) + bd.phi * tau - log_denom);
  return std::exp(log_f - g * r_now);
}

double zcb_price_model1(const CirParams& pr, const CirParams& ps, double r_now,
                        double s_now, double tau, Leg leg) {
  const double price_r = zcb_price_cir(pr, r_now, tau);
  if (leg == Leg::risk_free) return price_r;
  return price_r * zcb_price_cir(ps, s_now, tau);
}

double zero_rate(double price, double tau) {
  if (!(price > 0.0) || price > 1.0) {
    throw std::invalid_argument("zero_rate: price must be in (0, 1]");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("zero_rate: tau must be > 0");
  return -std::log(price) / tau;
}

double price_from_rate(double rate, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("price_from_rate: tau must be > 0");
  return std::exp(-rate * tau);
}

}  // namespace adcir
