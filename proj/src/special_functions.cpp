#include "adcir/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adcir {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 2000;

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k <= kMaxIter; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) by modified Lentz, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Sum of the ascending Bessel series in linear space with periodic
// rescaling, so arbitrarily large arguments stay within double range.
double log_bessel_series_scaled(double alpha, double y) {
  const double q = 0.25 * y * y;
  double log_scale = alpha * std::log(0.5 * y) - std::lgamma(alpha + 1.0);
  double term = 1.0;
  double sum = 1.0;
  const std::size_t cap = static_cast<std::size_t>(y + 1000.0) + 2000;
  for (std::size_t k = 1; k <= cap; ++k) {
    term *= q / (static_cast<double>(k) * (alpha + static_cast<double>(k)));
    sum += term;
    if (term < sum * 1e-17 && static_cast<double>(k) * (alpha + static_cast<double>(k)) > q) break;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::numbers::ln10;
    }
  }
  return std::log(sum) + log_scale;
}

// Asymptotic expansion for large argument; returns false when the terms
// diverge before reaching the requested accuracy.
bool log_bessel_asymptotic(double alpha, double y, double* out) {
  const double mu = 4.0 * alpha * alpha;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::fabs(term);
  for (int k = 1; k <= 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * y);
    const double mag = std::fabs(term);
    if (mag > prev) return false;  // divergence onset
    sum += term;
    if (mag < 1e-17 * std::fabs(sum)) {
      *out = y - 0.5 * std::log(2.0 * std::numbers::pi * y) + std::log(sum);
      return true;
    }
    prev = mag;
  }
  return false;
}

}  // namespace

double lower_gamma_regularized(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma P: shape must be > 0");
  if (x < 0.0) throw std::invalid_argument("gamma P: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double upper_gamma_regularized(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma Q: shape must be > 0");
  if (x < 0.0) throw std::invalid_argument("gamma Q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double log_bessel_i(double alpha, double y) {
  if (!(alpha > -1.0)) throw std::invalid_argument("bessel I: order must be > -1");
  if (y < 0.0) throw std::invalid_argument("bessel I: argument must be >= 0");
  if (y == 0.0) {
    if (alpha == 0.0) return 0.0;
    return alpha > 0.0 ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
  }
  if (y <= kBesselSeriesCutoff) return log_bessel_series_scaled(alpha, y);
  double out = 0.0;
  if (log_bessel_asymptotic(alpha, y, &out)) return out;
  return log_bessel_series_scaled(alpha, y);
}

double bessel_i(double alpha, double y) {
  return std::exp(log_bessel_i(alpha, y));
}

double gamma_pdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("gamma pdf: shape and rate must be > 0");
  }
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (shape > 1.0) return 0.0;
    if (shape == 1.0) return rate;
    throw std::domain_error("gamma pdf: singular at x = 0 for shape < 1");
  }
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) -
                  rate * x - std::lgamma(shape));
}

double gamma_cdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("gamma cdf: shape and rate must be > 0");
  }
  if (x <= 0.0) return 0.0;
  return lower_gamma_regularized(shape, rate * x);
}

double noncentral_chi_square_cdf(double y, double dof, double lambda,
                                 double tail_tol) {
  if (!(dof > 0.0)) throw std::invalid_argument("ncx2 cdf: dof must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("ncx2 cdf: lambda must be >= 0");
  if (y < 0.0) throw std::invalid_argument("ncx2 cdf: y must be >= 0");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;

  const double a = 0.5 * dof;   // central chi-square CDF(y; n) = P(n/2, y/2)
  const double z = 0.5 * y;
  const double mean = 0.5 * lambda;
  if (mean == 0.0) return lower_gamma_regularized(a, z);

  // Walk the Poisson weights outward from the mode; step the incomplete
  // gamma values with the one-term recurrences
  //   P(a+1, z) = P(a, z) - t(a),   t(a) = z^a e^{-z} / Gamma(a+1).
  const std::uint64_t m = static_cast<std::uint64_t>(mean);
  const double log_mean = std::log(mean);
  auto poisson_w = [&](std::uint64_t j) {
    const double jd = static_cast<double>(j);
    return std::exp(-mean + jd * log_mean - std::lgamma(jd + 1.0));
  };
  auto gamma_step_term = [&](double aa) {
    // t(aa) = z^aa e^{-z} / Gamma(aa + 1)
    return std::exp(aa * std::log(z) - z - std::lgamma(aa + 1.0));
  };

  double w = poisson_w(m);
  double p_up = lower_gamma_regularized(a + static_cast<double>(m), z);
  double p_down = p_up;
  double t_up = gamma_step_term(a + static_cast<double>(m));
  double t_down = t_up;
  double w_up = w;
  double w_down = w;
  double covered = w;
  double sum = w * p_up;

  std::uint64_t j_up = m;
  std::uint64_t j_down = m;
  bool down_done = (m == 0);
  while (covered < 1.0 - tail_tol) {
    // upward step
    {
      const double aj = a + static_cast<double>(j_up);
      w_up *= mean / static_cast<double>(j_up + 1);
      p_up -= t_up;
      if (p_up < 0.0) p_up = 0.0;
      t_up *= z / (aj + 1.0);
      ++j_up;
      covered += w_up;
      sum += w_up * p_up;
    }
    // downward step
    if (!down_done) {
      const double aj = a + static_cast<double>(j_down);
      w_down *= static_cast<double>(j_down) / mean;
      t_down *= aj / z;
      p_down += t_down;
      if (p_down > 1.0) p_down = 1.0;
      --j_down;
      covered += w_down;
      sum += w_down * p_down;
      if (j_down == 0) down_done = true;
    }
    if (j_up > m + 100000000ull) break;  // unreachable for sane inputs
  }
  if (sum < 0.0) return 0.0;
  if (sum > 1.0) return 1.0;
  return sum;
}

}  // namespace adcir
