#pragma once

// Market-data ingestion and curve construction: zero-rate curves from
// quotes, natural cubic-spline interpolation evaluated at integer tenors,
// the single-curve annual swap bootstrap, and spread curves.

#include <iosfwd>
#include <string>
#include <vector>

namespace adcir {

enum class QuoteKind { zero_rate, discount_price, swap_rate };

struct Quote {
  double maturity = 0.0;  // years
  QuoteKind kind = QuoteKind::zero_rate;
  double value = 0.0;
};

struct QuoteSet {
  std::vector<Quote> quotes;

  // Maturities strictly positive and strictly increasing per kind; rates in
  // (-0.5, 1); prices in (0, 1].
  void validate() const;
};

// Natural cubic spline through strictly increasing knots. Evaluation
// outside the knot range is a hard error.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double second_derivative(double t) const;
  const std::vector<double>& knots_x() const { return x_; }
  const std::vector<double>& knots_y() const { return y_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

class YieldCurve {
 public:
  YieldCurve() = default;

  // Curve through the given knots; tenor grid equals the knots.
  static YieldCurve from_zero_rates(std::vector<double> tenors,
                                    std::vector<double> rates);

  double rate(double tau) const { return spline_(tau); }
  const std::vector<double>& tenors() const { return tenors_; }
  const std::vector<double>& zero_rates() const { return rates_; }
  const CubicSpline& interpolator() const { return spline_; }

 private:
  std::vector<double> tenors_;
  std::vector<double> rates_;
  CubicSpline spline_;
};

// Converts quotes to continuously compounded zero rates, fits the natural
// spline through them and evaluates at tau = 1..30. Swap-rate quotes are
// routed through the bootstrap and cannot be mixed with other kinds.
YieldCurve build_curve(const QuoteSet& q);

// Discount factors from the par recursion
//   P_n = (1 - S_n sum_{k<n} P_k) / (1 + S_n)
// for annual 30/360 fixed legs; rates given for consecutive tenors 1..n.
YieldCurve bootstrap_swaps(const std::vector<double>& par_rates);

// Pointwise i_risky - i_riskfree on identical tenor grids.
std::vector<double> spread_curve(const YieldCurve& it, const YieldCurve& de);

// Par rate implied by the curve's discount factors; used to check the
// bootstrap recursion against its inputs.
double par_swap_rate(const YieldCurve& curve, int tenor_years);

// CSV ingestion/emission. Readers skip '#' comment lines and the header
// row; writers prepend the given comment lines.
QuoteSet read_quotes_csv(std::istream& in);
void write_curve_csv(const YieldCurve& curve, std::ostream& out,
                     const std::vector<std::string>& comment_lines = {});
YieldCurve read_curve_csv(std::istream& in);
void write_spread_csv(const std::vector<double>& tenors,
                      const std::vector<double>& spreads, std::ostream& out,
                      const std::vector<std::string>& comment_lines = {});

}  // namespace adcir
