#include "adcir/fixtures.hpp"

#include "adcir/rng.hpp"

namespace adcir {

CirParams table1_model1_riskfree() { return CirParams{0.0398, 0.0544, 0.0455, 0.0346}; }

CirParams table1_model1_spread() { return CirParams{4.0049, 0.0029, 0.0258, 0.0004}; }

AdcParams table1_model2() {
  AdcParams p;
  p.r = CirParams{0.0636, 0.0455, 0.0387, 0.0339};
  p.s = CirParams{3.3345, 0.0026, 0.0423, 0.0019};
  p.eps_r = 0.3859;
  p.eps_s = 0.2046;
  p.gamma = 0.2800;
  return p;
}

YieldCurve model1_factor_curve(const CirParams& p, double x_now) {
  std::vector<double> tenors(30), rates(30);
  for (int i = 0; i < 30; ++i) {
    const double tau = i + 1.0;
    tenors[static_cast<std::size_t>(i)] = tau;
    rates[static_cast<std::size_t>(i)] =
        zero_rate(zcb_price_cir(p, x_now, tau), tau);
  }
  return YieldCurve::from_zero_rates(std::move(tenors), std::move(rates));
}

CurvePair synthetic_curves_model1(const CirParams& pr, const CirParams& ps,
                                  double r0, double s0) {
  std::vector<double> tenors(30), rf(30), risky(30);
  for (int i = 0; i < 30; ++i) {
    const double tau = i + 1.0;
    tenors[static_cast<std::size_t>(i)] = tau;
    const double p_rf = zcb_price_model1(pr, ps, r0, s0, tau, Leg::risk_free);
    const double p_ry = zcb_price_model1(pr, ps, r0, s0, tau, Leg::risky);
    rf[static_cast<std::size_t>(i)] = zero_rate(p_rf, tau);
    risky[static_cast<std::size_t>(i)] = zero_rate(p_ry, tau);
  }
  CurvePair out;
  out.riskfree = YieldCurve::from_zero_rates(tenors, std::move(rf));
  out.risky = YieldCurve::from_zero_rates(std::move(tenors), std::move(risky));
  return out;
}

std::pair<QuoteSet, QuoteSet> synthetic_quotes_model1(const CirParams& pr,
                                                      const CirParams& ps,
                                                      double r0, double s0,
                                                      double noise_bp,
                                                      std::uint64_t seed) {
  const CurvePair curves = synthetic_curves_model1(pr, ps, r0, s0);
  RandomStream rng = RandomStream::keyed(seed, 0xF1F7ull);
  auto to_quotes = [&](const YieldCurve& c) {
    QuoteSet qs;
    for (std::size_t i = 0; i < c.tenors().size(); ++i) {
      const double noise =
          (2.0 * rng.next_unit() - 1.0) * noise_bp * 1e-4;
      qs.quotes.push_back(
          {c.tenors()[i], QuoteKind::zero_rate, c.zero_rates()[i] + noise});
    }
    return qs;
  };
  QuoteSet german = to_quotes(curves.riskfree);
  QuoteSet italian = to_quotes(curves.risky);
  return {std::move(german), std::move(italian)};
}

}  // namespace adcir
