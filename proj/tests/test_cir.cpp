#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adcir/cir.hpp"
#include "adcir/fixtures.hpp"
#include "adcir/stats.hpp"
#include "support/oracles.hpp"

using namespace adcir;

namespace {

// transition density through the mixture oracle: 2c * ncx2_pdf(2cx; 2nu, 2u)
double density_oracle(const CirParams& p, double t, double x) {
  const TransitionCoeffs k = transition_coeffs(p, t);
  return 2.0 * k.c *
         oracles::ncx2_pdf_mixture(2.0 * k.c * x, 2.0 * k.nu, 2.0 * k.u);
}

}  // namespace

TEST_CASE("parameter validation and derived shape") {
  CirParams p = table1_model1_riskfree();
  p.validate();
  CHECK(p.nu() == doctest::Approx(2.092).epsilon(5e-4));
  // published table rounds the underlying parameters; accept |dnu| <= 0.02
  CHECK(std::fabs(p.nu() - 2.0857) <= 0.02);

  CirParams q = table1_model1_spread();
  CHECK(q.nu() == doctest::Approx(34.90).epsilon(5e-4));
  CHECK(std::fabs(q.nu() - 35.0593) <= 0.2);

  // sigma^2 = 2 kappa theta sits exactly on nu = 1 (theta chosen so the
  // identity holds in floating point)
  const double sigma1 = 0.2;
  CirParams boundary{0.5, sigma1 * sigma1 / (2.0 * 0.5), sigma1, 0.02};
  CHECK(boundary.nu() == 1.0);

  CHECK_THROWS_AS((CirParams{-0.1, 0.05, 0.1, 0.03}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CirParams{0.1, 0.0, 0.1, 0.03}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CirParams{0.1, 0.05, 0.1, -0.03}.validate()), std::invalid_argument);
}

TEST_CASE("transition density normalizes to one") {
  const CirParams p = table1_model1_riskfree();
  for (double t : {1.0, 5.0, 20.0}) {
    const Moments cm = conditional_moments(p, p.x0, t);
    const double hi = cm.mean + 60.0 * std::sqrt(cm.variance);
    const double mass = oracles::adaptive_simpson(
        [&](double x) { return transition_density(p, t, x); }, 0.0, hi, 1e-11);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("transition density approaches the stationary Gamma law") {
  const CirParams p = table1_model1_riskfree();
  // long horizon: density within 1e-6 relative of the Gamma limit, for
  // different initial conditions
  for (double x0 : {0.01, 0.0346, 0.09}) {
    CirParams q = p;
    q.x0 = x0;
    for (double x : {0.02, 0.05, 0.12}) {
      const double pt = transition_density(q, 400.0, x);
      const double pi = stationary_density(q, x);
      CHECK(pt == doctest::Approx(pi).epsilon(1e-6));
    }
  }

  // sup-norm distance decreases monotonically over t = 5, 10, 20, 50
  std::vector<double> grid;
  for (int i = 1; i <= 60; ++i) grid.push_back(0.005 * i);
  double prev = 1e300;
  for (double t : {5.0, 10.0, 20.0, 50.0}) {
    double sup = 0.0;
    for (double x : grid) {
      sup = std::max(sup,
                     std::fabs(transition_density(p, t, x) - stationary_density(p, x)));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("transition density agrees with the mixture oracle pointwise") {
  const CirParams p = table1_model1_riskfree();
  // frozen reference: scipy.stats.ncx2.pdf rescaled by 2c at (t=1, x=theta)
  CHECK(transition_density(p, 1.0, p.theta) ==
        doctest::Approx(4.3518128171735615).epsilon(1e-10));
  for (double t : {0.25, 1.0, 5.0}) {
    for (double x : {0.005, 0.0346, 0.08, 0.2}) {
      CHECK(transition_density(p, t, x) ==
            doctest::Approx(density_oracle(p, t, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("transition density boundary behaviour at x = 0") {
  CirParams above{0.5, 0.04, 0.1, 0.03};  // nu = 4
  CHECK(transition_density(above, 1.0, 0.0) == 0.0);

  const double sigma1 = 0.2;
  CirParams at{0.5, sigma1 * sigma1 / (2.0 * 0.5), sigma1, 0.03};  // nu = 1
  REQUIRE(at.nu() == 1.0);
  const TransitionCoeffs k = transition_coeffs(at, 1.0);
  CHECK(transition_density(at, 1.0, 0.0) ==
        doctest::Approx(k.c * std::exp(-k.u)).epsilon(1e-13));

  CirParams below{0.125, 0.02, 0.1, 0.005};  // nu = 0.5
  CHECK_THROWS_AS(transition_density(below, 1.0, 0.0), std::domain_error);
  CHECK(std::isfinite(transition_density(below, 1.0, 1e-12)));

  CHECK_THROWS_AS(transition_density(above, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(transition_density(above, 1.0, -0.01), std::invalid_argument);
}

TEST_CASE("transition coefficients stay accurate for tiny horizons") {
  const CirParams p = table1_model1_riskfree();
  const double t = 1e-13;  // kappa * t ~ 4e-15
  const TransitionCoeffs k = transition_coeffs(p, t);
  const double series = 2.0 / (p.sigma * p.sigma * t * (1.0 - 0.5 * p.kappa * t));
  CHECK(k.c == doctest::Approx(series).epsilon(1e-12));
  CHECK(k.u >= 0.0);
}

TEST_CASE("transition cdf basics and quadrature cross-check") {
  const CirParams p = table1_model1_riskfree();
  CHECK(transition_cdf(p, 5.0, 0.0) == 0.0);
  CHECK(transition_cdf(p, 5.0, std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(transition_cdf(p, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(transition_cdf(p, 1.0, -0.1), std::invalid_argument);

  // monotone in x
  double prev = -1.0;
  for (double x : {0.01, 0.02, 0.04, 0.08, 0.16}) {
    const double f = transition_cdf(p, 5.0, x);
    CHECK(f > prev);
    prev = f;
  }

  // frozen reference: scipy.stats.ncx2.cdf at (t=5, Table 1 risk-free)
  CHECK(transition_cdf(p, 5.0, 0.02) == doctest::Approx(0.1435496573123982).epsilon(1e-10));
  CHECK(transition_cdf(p, 5.0, 0.05) == doctest::Approx(0.7704035958941919).epsilon(1e-10));
  CHECK(transition_cdf(p, 5.0, 0.10) == doctest::Approx(0.9967494957917074).epsilon(1e-10));

  // cdf equals the integral of the density within 1e-7
  for (double x : {0.02, 0.05, 0.10}) {
    const double integral = oracles::adaptive_simpson(
        [&](double y) { return transition_density(p, 5.0, y); }, 0.0, x, 1e-11);
    CHECK(transition_cdf(p, 5.0, x) == doctest::Approx(integral).epsilon(1e-7));
  }
}

TEST_CASE("Chapman-Kolmogorov composition") {
  const CirParams p = table1_model1_riskfree();
  const double t = 1.0, s = 2.0;
  for (double x : {0.02, 0.05, 0.09}) {
    auto integrand = [&](double y) {
      CirParams mid = p;
      mid.x0 = y;
      return transition_density(p, t, y) * transition_density(mid, s, x);
    };
    const double composed = oracles::adaptive_simpson(integrand, 1e-9, 0.6, 1e-11);
    CHECK(composed == doctest::Approx(transition_density(p, t + s, x)).epsilon(1e-6));
  }
}

TEST_CASE("stationary moments") {
  const CirParams p = table1_model1_riskfree();
  const Moments m = stationary_moments(p);
  CHECK(m.mean == p.theta);  // Gamma(nu, nu/theta) mean is exactly theta
  CHECK(m.variance == doctest::Approx(1.4149e-3).epsilon(5e-4));
  // table's omega row reads as the Gamma scale theta/nu
  CHECK(p.stationary_scale() == doctest::Approx(0.02608).epsilon(5e-3));
  CHECK(p.omega() == doctest::Approx(p.nu() / p.theta).epsilon(1e-15));

  // stationary density integrates the cdf
  const double cdf = stationary_cdf(p, 0.06);
  const double integral = oracles::adaptive_simpson(
      [&](double x) { return stationary_density(p, x); }, 1e-12, 0.06, 1e-12);
  CHECK(cdf == doctest::Approx(integral).epsilon(1e-9));
}

TEST_CASE("exact sampler matches conditional moments") {
  const CirParams p = table1_model1_riskfree();
  const double dt = 5.0;
  const double x_from = p.x0;

  // oracle moments by numerical integration of the transition density
  const Moments cm = conditional_moments(p, x_from, dt);
  const double hi = cm.mean + 60.0 * std::sqrt(cm.variance);
  const double mean_quad = oracles::adaptive_simpson(
      [&](double x) { return x * transition_density(p, dt, x); }, 0.0, hi, 1e-12);
  const double second_quad = oracles::adaptive_simpson(
      [&](double x) { return x * x * transition_density(p, dt, x); }, 0.0, hi, 1e-13);
  CHECK(mean_quad == doctest::Approx(cm.mean).epsilon(1e-9));
  CHECK(second_quad - mean_quad * mean_quad ==
        doctest::Approx(cm.variance).epsilon(1e-7));

  const int n = 100000;
  RandomStream rng(777);
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) {
    draws[static_cast<std::size_t>(i)] = sample_exact(p, x_from, dt, rng);
    CHECK(draws[static_cast<std::size_t>(i)] >= 0.0);
  }
  const Summary s = summarize(draws);
  CHECK(std::fabs(s.mean - mean_quad) < 3.0 * s.std_error);
  // second moment within 3 standard errors of the oracle value
  std::vector<double> squares(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) squares[i] = draws[i] * draws[i];
  const Summary s2 = summarize(squares);
  CHECK(std::fabs(s2.mean - second_quad) < 3.0 * s2.std_error);
}

TEST_CASE("exact sampler distribution: transition law and stationary limit") {
  const CirParams p = table1_model1_riskfree();
  const int n = 30000;
  RandomStream rng(2025);

  // at dt = 5 the empirical law matches the transition cdf
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) {
    draws[static_cast<std::size_t>(i)] = sample_exact(p, p.x0, 5.0, rng);
  }
  const KsResult ks1 =
      ks_test(draws, [&](double x) { return transition_cdf(p, 5.0, x); });
  CHECK(ks1.pass());

  // dt -> infinity from x0 = theta: stationary Gamma
  for (int i = 0; i < n; ++i) {
    draws[static_cast<std::size_t>(i)] = sample_exact(p, p.theta, 400.0, rng);
  }
  const KsResult ks2 =
      ks_test(draws, [&](double x) { return stationary_cdf(p, x); });
  CHECK(ks2.pass());

  CHECK_THROWS_AS(sample_exact(p, 0.01, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_exact(p, -0.01, 1.0, rng), std::invalid_argument);
}

TEST_CASE("feller origin classification") {
  CHECK_FALSE(feller_hits_origin(table1_model1_riskfree()));  // nu ~ 2.09
  const double sigma1 = 0.2;
  CirParams boundary{0.5, sigma1 * sigma1 / (2.0 * 0.5), sigma1, 0.02};
  REQUIRE(boundary.nu() == 1.0);
  CHECK_FALSE(feller_hits_origin(boundary));                  // nu = 1 exactly
  CHECK(feller_hits_origin(CirParams{0.125, 0.02, 0.1, 0.005}));  // nu = 0.5
}
