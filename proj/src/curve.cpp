#include "adcir/curve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "adcir/pricing.hpp"

namespace adcir {

void QuoteSet::validate() const {
  if (quotes.empty()) throw std::invalid_argument("QuoteSet: no quotes");
  std::map<QuoteKind, double> last_maturity;
  for (const Quote& q : quotes) {
    if (!(q.maturity > 0.0)) {
      throw std::invalid_argument("QuoteSet: maturities must be > 0");
    }
    auto it = last_maturity.find(q.kind);
    if (it != last_maturity.end() && q.maturity <= it->second) {
      throw std::invalid_argument(
          "QuoteSet: maturities must be strictly increasing per kind");
    }
    last_maturity[q.kind] = q.maturity;
    switch (q.kind) {
      case QuoteKind::zero_rate:
      case QuoteKind::swap_rate:
        if (!(q.value > -0.5 && q.value < 1.0)) {
          throw std::invalid_argument("QuoteSet: rates must lie in (-0.5, 1)");
        }
        break;
      case QuoteKind::discount_price:
        if (!(q.value > 0.0 && q.value <= 1.0)) {
          throw std::invalid_argument("QuoteSet: prices must lie in (0, 1]");
        }
        break;
    }
  }
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 1 || y_.size() != n) {
    throw std::invalid_argument("CubicSpline: need >= 1 knot");
  }
  if (n == 1) {
    m_.assign(1, 0.0);
    return;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("CubicSpline: knots must be strictly increasing");
    }
  }
  m_.assign(n, 0.0);
  if (n == 2) return;  // linear; natural boundary already satisfied

  // Thomas solve of the tridiagonal system for the interior second
  // derivatives; m_0 = m_{n-1} = 0 is the natural boundary.
  const std::size_t k = n - 2;
  std::vector<double> diag(k), rhs(k), upper(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = x_[i + 1] - x_[i];  // h_i, sub-diagonal entry
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) {
    m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
  }
}

std::size_t CubicSpline::segment(double t) const {
  if (x_.empty()) throw std::logic_error("CubicSpline: empty spline");
  const double lo = x_.front();
  const double hi = x_.back();
  const double tol = 1e-12 * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  if (t < lo - tol || t > hi + tol) {
    throw std::out_of_range("CubicSpline: extrapolation is not supported");
  }
  const double tc = std::clamp(t, lo, hi);
  auto it = std::upper_bound(x_.begin(), x_.end(), tc);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) i = 1;
  if (i >= x_.size()) i = x_.size() - 1;
  return i - 1;
}

double CubicSpline::operator()(double t) const {
  if (x_.size() == 1) {
    if (std::fabs(t - x_[0]) > 1e-12 * std::max(1.0, std::fabs(x_[0]))) {
      throw std::out_of_range("CubicSpline: extrapolation is not supported");
    }
    return y_[0];
  }
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::second_derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

YieldCurve YieldCurve::from_zero_rates(std::vector<double> tenors,
                                       std::vector<double> rates) {
  YieldCurve c;
  c.spline_ = CubicSpline(tenors, rates);
  c.tenors_ = std::move(tenors);
  c.rates_ = std::move(rates);
  return c;
}

YieldCurve build_curve(const QuoteSet& q) {
  q.validate();
  bool has_swap = false;
  bool has_other = false;
  for (const Quote& quote : q.quotes) {
    (quote.kind == QuoteKind::swap_rate ? has_swap : has_other) = true;
  }
  if (has_swap && has_other) {
    throw std::invalid_argument(
        "build_curve: swap quotes cannot be mixed with zero/price quotes");
  }
  if (has_swap) {
    std::vector<double> par;
    par.reserve(q.quotes.size());
    for (std::size_t i = 0; i < q.quotes.size(); ++i) {
      const double expected = static_cast<double>(i + 1);
      if (std::fabs(q.quotes[i].maturity - expected) > 1e-9) {
        throw std::invalid_argument(
            "build_curve: swap quotes must cover consecutive annual tenors from 1y");
      }
      par.push_back(q.quotes[i].value);
    }
    return bootstrap_swaps(par);
  }

  std::vector<double> maturities, rates;
  maturities.reserve(q.quotes.size());
  rates.reserve(q.quotes.size());
  for (const Quote& quote : q.quotes) {
    maturities.push_back(quote.maturity);
    rates.push_back(quote.kind == QuoteKind::discount_price
                        ? zero_rate(quote.value, quote.maturity)
                        : quote.value);
  }
  for (std::size_t i = 1; i < maturities.size(); ++i) {
    if (!(maturities[i] > maturities[i - 1])) {
      throw std::invalid_argument(
          "build_curve: mixed-kind quotes must have strictly increasing maturities");
    }
  }
  if (maturities.size() < 2) {
    throw std::invalid_argument("build_curve: need >= 2 quotes");
  }
  const CubicSpline quote_spline(maturities, rates);
  if (maturities.front() > 1.0 + 1e-9 || maturities.back() < 30.0 - 1e-9) {
    throw std::invalid_argument(
        "build_curve: quotes must span the 1..30y evaluation grid");
  }
  std::vector<double> tenors(30), grid_rates(30);
  for (int i = 0; i < 30; ++i) {
    tenors[i] = static_cast<double>(i + 1);
    grid_rates[i] = quote_spline(tenors[i]);
  }
  return YieldCurve::from_zero_rates(std::move(tenors), std::move(grid_rates));
}

YieldCurve bootstrap_swaps(const std::vector<double>& par_rates) {
  if (par_rates.empty()) {
    throw std::invalid_argument("bootstrap_swaps: no par rates");
  }
  std::vector<double> tenors(par_rates.size()), rates(par_rates.size());
  double annuity = 0.0;
  for (std::size_t n = 0; n < par_rates.size(); ++n) {
    const double s = par_rates[n];
    const double p = (1.0 - s * annuity) / (1.0 + s);
    if (!(p > 0.0)) {
      throw std::invalid_argument(
          "bootstrap_swaps: inconsistent quotes produce a nonpositive discount");
    }
    annuity += p;
    tenors[n] = static_cast<double>(n + 1);
    rates[n] = -std::log(p) / tenors[n];
  }
  return YieldCurve::from_zero_rates(std::move(tenors), std::move(rates));
}

std::vector<double> spread_curve(const YieldCurve& it, const YieldCurve& de) {
  const auto& ti = it.tenors();
  const auto& td = de.tenors();
  if (ti.size() != td.size() ||
      !std::equal(ti.begin(), ti.end(), td.begin(),
                  [](double a, double b) { return std::fabs(a - b) <= 1e-12; })) {
    throw std::invalid_argument("spread_curve: tenor grids differ");
  }
  std::vector<double> s(ti.size());
  for (std::size_t i = 0; i < ti.size(); ++i) {
    s[i] = it.zero_rates()[i] - de.zero_rates()[i];
  }
  return s;
}

double par_swap_rate(const YieldCurve& curve, int tenor_years) {
  if (tenor_years < 1) throw std::invalid_argument("par_swap_rate: tenor must be >= 1");
  double annuity = 0.0;
  double pn = 1.0;
  for (int k = 1; k <= tenor_years; ++k) {
    pn = std::exp(-curve.rate(static_cast<double>(k)) * k);
    annuity += pn;
  }
  return (1.0 - pn) / annuity;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    // trim spaces
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string()
                                         : field.substr(b, e - b + 1));
  }
  return out;
}

bool is_skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

}  // namespace

QuoteSet read_quotes_csv(std::istream& in) {
  QuoteSet qs;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (is_skippable(line)) continue;
    if (!header_seen) {
      header_seen = true;  // `maturity_years,kind,value`
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw std::invalid_argument("quotes csv: expected 3 columns, got line: " + line);
    }
    Quote q;
    q.maturity = std::stod(fields[0]);
    if (fields[1] == "zero_rate") {
      q.kind = QuoteKind::zero_rate;
    } else if (fields[1] == "discount_price") {
      q.kind = QuoteKind::discount_price;
    } else if (fields[1] == "swap_rate") {
      q.kind = QuoteKind::swap_rate;
    } else {
      throw std::invalid_argument("quotes csv: unknown kind '" + fields[1] + "'");
    }
    q.value = std::stod(fields[2]);
    qs.quotes.push_back(q);
  }
  qs.validate();
  return qs;
}

void write_curve_csv(const YieldCurve& curve, std::ostream& out,
                     const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  out << "tenor_years,zero_rate\n";
  out.precision(17);
  for (std::size_t i = 0; i < curve.tenors().size(); ++i) {
    out << curve.tenors()[i] << "," << curve.zero_rates()[i] << "\n";
  }
}

YieldCurve read_curve_csv(std::istream& in) {
  std::vector<double> tenors, rates;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (is_skippable(line)) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw std::invalid_argument("curve csv: expected 2 columns");
    }
    tenors.push_back(std::stod(fields[0]));
    rates.push_back(std::stod(fields[1]));
  }
  return YieldCurve::from_zero_rates(std::move(tenors), std::move(rates));
}

void write_spread_csv(const std::vector<double>& tenors,
                      const std::vector<double>& spreads, std::ostream& out,
                      const std::vector<std::string>& comment_lines) {
  if (tenors.size() != spreads.size()) {
    throw std::invalid_argument("spread csv: size mismatch");
  }
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  out << "tenor_years,spread\n";
  out.precision(17);
  for (std::size_t i = 0; i < tenors.size(); ++i) {
    out << tenors[i] << "," << spreads[i] << "\n";
  }
}

}  // namespace adcir
