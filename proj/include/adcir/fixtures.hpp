#pragma once

// Reference parameter sets and synthetic market fixtures. The quoted
// market data behind the original study are not published, so the repo
// ships curves generated from the model-1 closed form, optionally with
// seed-fixed uniform noise on the bid-ask scale (a couple of basis points).

#include <cstdint>
#include <utility>

#include "adcir/adc.hpp"
#include "adcir/curve.hpp"
#include "adcir/pricing.hpp"

namespace adcir {

// Fitted independent-two-factor parameters (also the degenerate ADC column).
CirParams table1_model1_riskfree();  // kappa 0.0398, theta 5.44%, sigma 4.55%, r0 3.46%
CirParams table1_model1_spread();    // kappa 4.0049, theta 0.29%, sigma 2.58%, s0 0.04%

// Fitted correlated-model parameters: eps_r 0.3859, eps_s 0.2046, gamma 0.28.
AdcParams table1_model2();

// Zero curve implied by one factor's closed-form prices at tau = 1..30.
YieldCurve model1_factor_curve(const CirParams& p, double x_now);

struct CurvePair {
  YieldCurve riskfree;  // e.g. German
  YieldCurve risky;     // e.g. Italian
};

// Risk-free and risky curves from the model-1 closed form at tau = 1..30.
CurvePair synthetic_curves_model1(const CirParams& pr, const CirParams& ps,
                                  double r0, double s0);

// Same curves as zero-rate quote sets with +-noise_bp uniform noise.
std::pair<QuoteSet, QuoteSet> synthetic_quotes_model1(const CirParams& pr,
                                                      const CirParams& ps,
                                                      double r0, double s0,
                                                      double noise_bp,
                                                      std::uint64_t seed);

}  // namespace adcir
