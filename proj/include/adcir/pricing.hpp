#pragma once

// Closed-form zero-coupon bond prices for the one-factor square-root model
// and the independent two-factor model, plus rate/price conversions.
// Curve rates are continuously compounded throughout.

#include "adcir/cir.hpp"

namespace adcir {

enum class Leg { risk_free, risky };

struct BrownDybvig {
  double d = 0.0;    // sqrt(kappa^2 + 2 sigma^2)
  double phi = 0.0;  // (d + kappa) / 2
};

BrownDybvig brown_dybvig(double kappa, double sigma);
BrownDybvig brown_dybvig(const CirParams& p);

// P(tau) = f e^{-g r_now} with
//   f = [d e^{phi tau} / (phi (e^{d tau} - 1) + d)]^nu,
//   g = (e^{d tau} - 1) / (phi (e^{d tau} - 1) + d);
// f is evaluated in log space so long maturities do not overflow.
double zcb_price_cir(const CirParams& p, double r_now, double tau);

// risk_free: the r-factor price; risky: the product of the factor prices.
double zcb_price_model1(const CirParams& pr, const CirParams& ps, double r_now,
                        double s_now, double tau, Leg leg);

// Continuously compounded zero rate and its inverse.
double zero_rate(double price, double tau);
double price_from_rate(double rate, double tau);

}  // namespace adcir
