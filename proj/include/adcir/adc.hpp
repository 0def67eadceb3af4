#pragma once

// Bivariate rate/credit-spread process with quadratic drift and diffusion,
// built so its invariant law is the product of the two factor Gamma laws.
// The correlation parameters eps_r, eps_s scale the diagonal corrections,
// gamma the off-diagonal one; admissibility is gamma^2 <= eps_r * eps_s.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adcir/cir.hpp"

namespace adcir {

enum class AdcError {
  nonpositive_cir_parameter,
  negative_epsilon,
  gamma_out_of_range,
};

class AdcValidationError : public std::invalid_argument {
 public:
  AdcValidationError(AdcError code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}
  AdcError code() const { return code_; }

 private:
  AdcError code_;
};

struct StateVector {
  double r = 0.0;
  double s = 0.0;
};

struct Vec2 {
  double r = 0.0;
  double s = 0.0;
};

// Symmetric 2x2 matrix in (r, s) coordinates.
struct Sym2 {
  double rr = 0.0;
  double rs = 0.0;
  double ss = 0.0;
};

struct AdcParams {
  CirParams r;  // benchmark risk-free factor
  CirParams s;  // credit-spread factor
  double eps_r = 0.0;
  double eps_s = 0.0;
  double gamma = 0.0;

  // The zero-correlation case must stay exact even when sigma is zero in
  // deterministic test configurations, hence the explicit zero returns.
  double beta_r() const { return eps_r == 0.0 ? 0.0 : eps_r / (r.sigma * r.sigma); }
  double beta_s() const { return eps_s == 0.0 ? 0.0 : eps_s / (s.sigma * s.sigma); }
  double alpha_r() const { return gamma == 0.0 ? 0.0 : gamma / (r.sigma * r.sigma); }
  double alpha_s() const { return gamma == 0.0 ? 0.0 : gamma / (s.sigma * s.sigma); }

  // Throws AdcValidationError with a distinct code per failure class.
  void validate() const;

  static AdcParams independent(const CirParams& r, const CirParams& s) {
    return AdcParams{r, s, 0.0, 0.0, 0.0};
  }
};

namespace detail {

inline void require_nonnegative_state(StateVector x, const char* where) {
  if (x.r < 0.0 || x.s < 0.0) {
    throw std::invalid_argument(std::string(where) +
                                ": state components must be >= 0");
  }
}

}  // namespace detail

inline Vec2 drift(const AdcParams& p, StateVector x) {
  detail::require_nonnegative_state(x, "drift");
  Vec2 a;
  a.r = p.r.kappa * (1.0 + p.beta_r() * x.s) * (p.r.theta - x.r) +
        p.s.kappa * p.alpha_s() * x.r * (p.s.theta - x.s);
  a.s = p.s.kappa * (1.0 + p.beta_s() * x.r) * (p.s.theta - x.s) +
        p.r.kappa * p.alpha_r() * x.s * (p.r.theta - x.r);
  return a;
}

inline Sym2 diffusion_matrix(const AdcParams& p, StateVector x) {
  detail::require_nonnegative_state(x, "diffusion_matrix");
  Sym2 m;
  m.rr = p.r.sigma * p.r.sigma * x.r + p.eps_r * x.r * x.s;
  m.ss = p.s.sigma * p.s.sigma * x.s + p.eps_s * x.r * x.s;
  m.rs = p.gamma * x.r * x.s;
  return m;
}

// det(S) in the structured form: the cubic part plus the quartic part
// proportional to eps_r eps_s - gamma^2.
double diffusion_determinant(const AdcParams& p, StateVector x);

// Lower-triangular factor B with B B^T = S. On the r-axis boundary
// (S_rr = 0) the factor degenerates to diag(0, sqrt(S_ss)) and the flag is
// set.
struct DiffusionFactor {
  double b11 = 0.0;
  double b21 = 0.0;
  double b22 = 0.0;
  bool boundary_degenerate = false;
};

inline DiffusionFactor diffusion_factor(const AdcParams& p, StateVector x) {
  const Sym2 m = diffusion_matrix(p, x);
  DiffusionFactor b;
  if (m.rr == 0.0) {
    b.b22 = std::sqrt(m.ss);
    b.boundary_degenerate = true;
    return b;
  }
  b.b11 = std::sqrt(m.rr);
  b.b21 = m.rs / b.b11;
  const double rem = m.ss - b.b21 * b.b21;
  b.b22 = rem > 0.0 ? std::sqrt(rem) : 0.0;
  return b;
}

// True iff the joint process reaches the origin with positive probability,
// i.e. nu_r + nu_s < 1.
bool feller_multivariate(const AdcParams& p);

// Product of the two factor stationary Gamma densities; independent of
// eps_r, eps_s, gamma.
double stationary_joint_density(const AdcParams& p, StateVector x);

// Diagnostic spectral decomposition of S; not used by the simulation.
struct Eigensystem {
  double value_plus = 0.0;
  double value_minus = 0.0;
  Vec2 vector_plus;
  Vec2 vector_minus;
};

Eigensystem diffusion_eigensystem(const AdcParams& p, StateVector x);

// A twice-differentiable scalar field given through callbacks.
struct C2Field {
  std::function<double(StateVector)> value;
  std::function<Vec2(StateVector)> gradient;
  std::function<Sym2(StateVector)> hessian;
};

// (L f)(x) = A . grad f + 1/2 tr(S Hess f).
double generator_apply(const AdcParams& p, const C2Field& f, StateVector x);

// Largest asymmetry |int f Lg dpi - int g Lf dpi| over the test family
// {1, r, s, rs, r^2, s^2}, with the integrals taken against the invariant
// product measure by tensor Gauss-Laguerre quadrature (exact for these
// polynomial integrands).
double reversibility_defect(const AdcParams& p, int quad_points = 24);

// The six-polynomial test family used by the reversibility check.
std::vector<C2Field> reversibility_test_family();

}  // namespace adcir
