#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adcir/adc.hpp"
#include "adcir/fixtures.hpp"
#include "adcir/rng.hpp"
#include "support/oracles.hpp"

using namespace adcir;

namespace {

AdcParams random_admissible(RandomStream& rng) {
  auto uniform = [&](double lo, double hi) {
    return lo + rng.next_unit() * (hi - lo);
  };
  AdcParams p;
  p.r = CirParams{uniform(0.05, 4.0), uniform(0.01, 0.12), uniform(0.02, 0.4),
                  uniform(0.005, 0.1)};
  p.s = CirParams{uniform(0.05, 4.0), uniform(0.01, 0.12), uniform(0.02, 0.4),
                  uniform(0.005, 0.1)};
  p.eps_r = uniform(0.0, 0.5);
  p.eps_s = uniform(0.0, 0.5);
  p.gamma = uniform(-1.0, 1.0) * std::sqrt(p.eps_r * p.eps_s);
  p.validate();
  return p;
}

StateVector random_state(RandomStream& rng) {
  return StateVector{0.001 + 0.2 * rng.next_unit(), 0.001 + 0.2 * rng.next_unit()};
}

}  // namespace

TEST_CASE("validation accepts the fitted correlated parameters") {
  AdcParams p = table1_model2();
  p.validate();  // 0.28^2 = 0.0784 <= 0.3859 * 0.2046
  CHECK(p.beta_r() == doctest::Approx(257.66346840801504).epsilon(1e-12));
  CHECK(p.beta_s() == doctest::Approx(114.34703150411617).epsilon(1e-12));
}

TEST_CASE("validation error codes distinguish the failure classes") {
  AdcParams p = table1_model2();

  AdcParams bad_cir = p;
  bad_cir.r.sigma = 0.0;
  try {
    bad_cir.validate();
    FAIL("expected AdcValidationError");
  } catch (const AdcValidationError& e) {
    CHECK(e.code() == AdcError::nonpositive_cir_parameter);
  }

  AdcParams bad_eps = p;
  bad_eps.eps_r = -0.1;
  try {
    bad_eps.validate();
    FAIL("expected AdcValidationError");
  } catch (const AdcValidationError& e) {
    CHECK(e.code() == AdcError::negative_epsilon);
  }

  AdcParams bad_gamma = p;
  bad_gamma.eps_r = 0.0;
  bad_gamma.eps_s = 0.0;
  bad_gamma.gamma = 0.1;
  try {
    bad_gamma.validate();
    FAIL("expected AdcValidationError");
  } catch (const AdcValidationError& e) {
    CHECK(e.code() == AdcError::gamma_out_of_range);
  }

  // the closed admissibility interval accepts equality
  AdcParams edge = p;
  edge.gamma = std::sqrt(edge.eps_r * edge.eps_s);
  edge.validate();
}

TEST_CASE("drift vanishes at the joint mean and reduces in the degenerate case") {
  const AdcParams p = table1_model2();
  const Vec2 at_mean = drift(p, StateVector{p.r.theta, p.s.theta});
  CHECK(at_mean.r == 0.0);
  CHECK(at_mean.s == 0.0);

  // degenerate case: bitwise equal to the independent-factor form
  AdcParams indep = AdcParams::independent(table1_model1_riskfree(),
                                           table1_model1_spread());
  RandomStream rng(11);
  for (int i = 0; i < 200; ++i) {
    const StateVector x = random_state(rng);
    const Vec2 a = drift(indep, x);
    CHECK(a.r == indep.r.kappa * (indep.r.theta - x.r));
    CHECK(a.s == indep.s.kappa * (indep.s.theta - x.s));
  }

  CHECK_THROWS_AS(drift(p, StateVector{-0.01, 0.02}), std::invalid_argument);
}

TEST_CASE("drift matches the hand-expanded polynomial form") {
  const AdcParams p = table1_model2();
  const StateVector x{0.0339, 0.0019};
  // frozen evaluation of the expanded form (computed independently)
  const Vec2 a = drift(p, x);
  CHECK(a.r == doctest::Approx(0.01348136465816207).epsilon(1e-12));
  CHECK(a.s == doctest::Approx(0.011644228345725297).epsilon(1e-12));

  // runtime oracle: expanded monomial-by-monomial with no shared brackets
  RandomStream rng(12);
  for (int i = 0; i < 100; ++i) {
    const AdcParams q = random_admissible(rng);
    const StateVector y = random_state(rng);
    const double br = q.beta_r(), bs = q.beta_s(), ar = q.alpha_r(), as = q.alpha_s();
    const double a1 = q.r.kappa * q.r.theta - q.r.kappa * y.r +
                      q.r.kappa * br * q.r.theta * y.s -
                      q.r.kappa * br * y.r * y.s + q.s.kappa * as * q.s.theta * y.r -
                      q.s.kappa * as * y.r * y.s;
    const double a2 = q.s.kappa * q.s.theta - q.s.kappa * y.s +
                      q.s.kappa * bs * q.s.theta * y.r -
                      q.s.kappa * bs * y.r * y.s + q.r.kappa * ar * q.r.theta * y.s -
                      q.r.kappa * ar * y.s * y.r;
    const Vec2 got = drift(q, y);
    CHECK(got.r == doctest::Approx(a1).epsilon(1e-12));
    CHECK(got.s == doctest::Approx(a2).epsilon(1e-12));
  }
}

TEST_CASE("diffusion matrix determinant identity and degeneracies") {
  RandomStream rng(13);
  for (int i = 0; i < 500; ++i) {
    const AdcParams p = random_admissible(rng);
    const StateVector x = random_state(rng);
    const Sym2 m = diffusion_matrix(p, x);
    const double direct = m.rr * m.ss - m.rs * m.rs;
    const double structured = diffusion_determinant(p, x);
    const double scale = std::max(std::fabs(m.rr * m.ss), 1e-300);
    CHECK(std::fabs(direct - structured) <= 1e-12 * scale);
  }

  const AdcParams p = table1_model2();
  // axis boundary: S = diag(sigma_r^2 r, 0)
  const Sym2 on_axis = diffusion_matrix(p, StateVector{0.04, 0.0});
  CHECK(on_axis.rr == p.r.sigma * p.r.sigma * 0.04);
  CHECK(on_axis.ss == 0.0);
  CHECK(on_axis.rs == 0.0);

  // gamma^2 = eps_r eps_s kills the quartic term exactly
  AdcParams edge = p;
  edge.gamma = std::sqrt(edge.eps_r * edge.eps_s);
  const StateVector x{0.03, 0.002};
  const double sr2 = edge.r.sigma * edge.r.sigma;
  const double ss2 = edge.s.sigma * edge.s.sigma;
  const double cubic =
      x.r * x.s * (x.r * edge.eps_s * sr2 + x.s * edge.eps_r * ss2 + sr2 * ss2);
  CHECK(diffusion_determinant(edge, x) ==
        doctest::Approx(cubic).epsilon(1e-13));

  // degenerate case equals the independent diffusion bitwise
  AdcParams indep = AdcParams::independent(p.r, p.s);
  RandomStream rng2(14);
  for (int i = 0; i < 200; ++i) {
    const StateVector y = random_state(rng2);
    const Sym2 s = diffusion_matrix(indep, y);
    CHECK(s.rr == indep.r.sigma * indep.r.sigma * y.r);
    CHECK(s.ss == indep.s.sigma * indep.s.sigma * y.s);
    CHECK(s.rs == 0.0);
  }
}

TEST_CASE("matrix order bound: correlated diffusion dominates the independent one") {
  RandomStream rng(15);
  for (int i = 0; i < 300; ++i) {
    const AdcParams p = random_admissible(rng);
    const StateVector x = random_state(rng);
    const Sym2 s = diffusion_matrix(p, x);
    const double d11 = s.rr - p.r.sigma * p.r.sigma * x.r;
    const double d22 = s.ss - p.s.sigma * p.s.sigma * x.s;
    const double det = d11 * d22 - s.rs * s.rs;
    CHECK(d11 >= -1e-15);
    CHECK(d22 >= -1e-15);
    CHECK(det >= -1e-15 * std::max(1.0, std::fabs(d11 * d22)));
  }
}

TEST_CASE("cholesky factor reproduces the diffusion matrix") {
  RandomStream rng(16);
  for (int i = 0; i < 10000; ++i) {
    const AdcParams p = random_admissible(rng);
    const StateVector x = random_state(rng);
    const Sym2 s = diffusion_matrix(p, x);
    const DiffusionFactor b = diffusion_factor(p, x);
    const double r11 = b.b11 * b.b11;
    const double r21 = b.b21 * b.b11;
    const double r22 = b.b21 * b.b21 + b.b22 * b.b22;
    const double norm = std::max({std::fabs(s.rr), std::fabs(s.ss), std::fabs(s.rs)});
    CHECK(std::fabs(r11 - s.rr) <= 1e-12 * norm);
    CHECK(std::fabs(r21 - s.rs) <= 1e-12 * norm);
    CHECK(std::fabs(r22 - s.ss) <= 1e-12 * norm);
  }
}

TEST_CASE("cholesky factor matches a generic routine and handles boundaries") {
  const AdcParams p = table1_model2();
  const StateVector x{0.0455, 0.0026};
  const Sym2 s = diffusion_matrix(p, x);
  // generic 2x2 lower Cholesky
  const double l11 = std::sqrt(s.rr);
  const double l21 = s.rs / l11;
  const double l22 = std::sqrt(s.ss - l21 * l21);
  const DiffusionFactor b = diffusion_factor(p, x);
  CHECK(b.b11 == doctest::Approx(l11).epsilon(1e-14));
  CHECK(b.b21 == doctest::Approx(l21).epsilon(1e-14));
  CHECK(b.b22 == doctest::Approx(l22).epsilon(1e-14));
  CHECK_FALSE(b.boundary_degenerate);

  // gamma = 0: diagonal factor
  AdcParams diag = p;
  diag.gamma = 0.0;
  const Sym2 sd = diffusion_matrix(diag, x);
  const DiffusionFactor bd = diffusion_factor(diag, x);
  CHECK(bd.b11 == doctest::Approx(std::sqrt(sd.rr)).epsilon(1e-15));
  CHECK(bd.b21 == 0.0);
  CHECK(bd.b22 == doctest::Approx(std::sqrt(sd.ss)).epsilon(1e-15));

  // r-axis boundary: degenerate factor diag(0, sqrt(S_ss))
  const DiffusionFactor bb = diffusion_factor(p, StateVector{0.0, 0.0026});
  CHECK(bb.boundary_degenerate);
  CHECK(bb.b11 == 0.0);
  CHECK(bb.b21 == 0.0);
  CHECK(bb.b22 ==
        doctest::Approx(std::sqrt(p.s.sigma * p.s.sigma * 0.0026)).epsilon(1e-15));
}

TEST_CASE("multivariate feller condition is on the sum of the shapes") {
  CHECK_FALSE(feller_multivariate(table1_model2()));  // 3.87 + 9.69

  auto with_nu = [](double nu_r, double nu_s) {
    AdcParams p;
    const double kappa = 0.5, theta = 0.02;
    p.r = CirParams{kappa, theta, std::sqrt(2.0 * kappa * theta / nu_r), 0.01};
    p.s = CirParams{kappa, theta, std::sqrt(2.0 * kappa * theta / nu_s), 0.01};
    return p;
  };
  CHECK_FALSE(feller_multivariate(with_nu(0.4, 0.7)));  // sum 1.1
  CHECK(feller_multivariate(with_nu(0.3, 0.3)));        // sum 0.6
}

TEST_CASE("stationary joint density is the product law, untouched by correlation") {
  AdcParams p = table1_model2();
  RandomStream rng(17);
  for (int i = 0; i < 50; ++i) {
    const StateVector x{0.002 + 0.1 * rng.next_unit(),
                        0.0002 + 0.008 * rng.next_unit()};
    const double base = stationary_density(p.r, x.r) * stationary_density(p.s, x.s);
    CHECK(stationary_joint_density(p, x) == doctest::Approx(base).epsilon(1e-14));

    AdcParams q = p;
    q.eps_r = rng.next_unit();
    q.eps_s = rng.next_unit();
    q.gamma = (2.0 * rng.next_unit() - 1.0) * std::sqrt(q.eps_r * q.eps_s);
    CHECK(stationary_joint_density(q, x) == stationary_joint_density(p, x));
  }

  // normalization over the quadrant (box wide enough that the Gamma tails
  // are below 1e-10)
  const double mass = oracles::adaptive_simpson_2d(
      [&](double r, double s) {
        return stationary_joint_density(p, StateVector{r, s});
      },
      1e-10, 0.5, 1e-10, 0.03, 1e-9);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("diffusion eigensystem diagnostic satisfies S v = lambda v") {
  RandomStream rng(18);
  for (int i = 0; i < 200; ++i) {
    const AdcParams p = random_admissible(rng);
    const StateVector x = random_state(rng);
    const Sym2 s = diffusion_matrix(p, x);
    const Eigensystem e = diffusion_eigensystem(p, x);
    const double norm = std::max({std::fabs(s.rr), std::fabs(s.ss), 1e-300});
    auto residual = [&](double lambda, Vec2 v) {
      const double rr = s.rr * v.r + s.rs * v.s - lambda * v.r;
      const double ss = s.rs * v.r + s.ss * v.s - lambda * v.s;
      const double vn = std::max(std::fabs(v.r), std::fabs(v.s));
      return std::max(std::fabs(rr), std::fabs(ss)) / (vn * norm);
    };
    CHECK(residual(e.value_plus, e.vector_plus) < 1e-9);
    CHECK(residual(e.value_minus, e.vector_minus) < 1e-9);
    CHECK(e.value_plus >= e.value_minus);
    CHECK(e.value_minus >= -1e-12 * norm);  // psd
  }
}

TEST_CASE("generator kills constants and reduces on coordinates") {
  const AdcParams p = table1_model2();
  const std::vector<C2Field> fam = reversibility_test_family();
  RandomStream rng(19);
  for (int i = 0; i < 50; ++i) {
    const StateVector x = random_state(rng);
    CHECK(generator_apply(p, fam[0], x) == 0.0);  // constants
  }

  // degenerate parameters, f(x) = x.r: L f = kappa_r (theta_r - x.r)
  const AdcParams indep = AdcParams::independent(table1_model1_riskfree(),
                                                 table1_model1_spread());
  for (int i = 0; i < 50; ++i) {
    const StateVector x = random_state(rng);
    CHECK(generator_apply(indep, fam[1], x) ==
          doctest::Approx(indep.r.kappa * (indep.r.theta - x.r)).epsilon(1e-15));
  }
}

TEST_CASE("weak-form reversibility against the adaptive quadrature oracle") {
  // moderate parameters with nu >= 1 keep the truncated-box oracle accurate
  AdcParams p;
  p.r = CirParams{0.8, 0.05, 0.15, 0.04};   // nu = 3.56
  p.s = CirParams{1.2, 0.04, 0.12, 0.03};   // nu = 6.67
  p.eps_r = 0.3;
  p.eps_s = 0.2;
  p.gamma = 0.15;
  p.validate();

  const std::vector<C2Field> fam = reversibility_test_family();
  const C2Field& f = fam[1];  // x.r
  const C2Field& g = fam[2];  // x.s

  auto weighted = [&](const C2Field& a, const C2Field& b) {
    return oracles::adaptive_simpson_2d(
        [&](double r, double s) {
          const StateVector x{r, s};
          return a.value(x) * generator_apply(p, b, x) *
                 stationary_joint_density(p, x);
        },
        1e-9, 0.40, 1e-9, 0.30, 1e-9);
  };
  const double fg = weighted(f, g);
  const double gf = weighted(g, f);
  CHECK(std::fabs(fg - gf) < 1e-5);

  // the library's Gauss-Laguerre route agrees with the oracle integral
  const double defect = reversibility_defect(p);
  CHECK(defect < 1e-10);
}

TEST_CASE("reversibility defect vanishes for random admissible parameters") {
  RandomStream rng(20);
  for (int i = 0; i < 10; ++i) {
    const AdcParams p = random_admissible(rng);
    CHECK(reversibility_defect(p) < 1e-5);
  }
}
