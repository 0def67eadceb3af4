#include "adcir/adc.hpp"

#include <cmath>
#include <vector>

#include "adcir/quadrature.hpp"
#include "adcir/special_functions.hpp"

namespace adcir {

void AdcParams::validate() const {
  try {
    r.validate();
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw AdcValidationError(AdcError::nonpositive_cir_parameter, e.what());
  }
  if (!(eps_r >= 0.0) || !(eps_s >= 0.0) || !std::isfinite(eps_r) ||
      !std::isfinite(eps_s)) {
    throw AdcValidationError(AdcError::negative_epsilon,
                             "AdcParams: eps_r and eps_s must be >= 0");
  }
  if (!std::isfinite(gamma) || gamma * gamma > eps_r * eps_s) {
    throw AdcValidationError(
        AdcError::gamma_out_of_range,
        "AdcParams: gamma^2 must not exceed eps_r * eps_s");
  }
}

double diffusion_determinant(const AdcParams& p, StateVector x) {
  detail::require_nonnegative_state(x, "diffusion_determinant");
  const double sr2 = p.r.sigma * p.r.sigma;
  const double ss2 = p.s.sigma * p.s.sigma;
  const double cubic =
      x.r * x.s * (x.r * p.eps_s * sr2 + x.s * p.eps_r * ss2 + sr2 * ss2);
  const double quartic =
      x.r * x.r * x.s * x.s * (p.eps_r * p.eps_s - p.gamma * p.gamma);
  return cubic + quartic;
}

bool feller_multivariate(const AdcParams& p) {
  return p.r.nu() + p.s.nu() < 1.0;
}

double stationary_joint_density(const AdcParams& p, StateVector x) {
  if (!(x.r > 0.0) || !(x.s > 0.0)) {
    if (p.r.nu() < 1.0 || p.s.nu() < 1.0) {
      throw std::domain_error(
          "stationary_joint_density: singular on the boundary for nu < 1");
    }
  }
  return stationary_density(p.r, x.r) * stationary_density(p.s, x.s);
}

Eigensystem diffusion_eigensystem(const AdcParams& p, StateVector x) {
  const Sym2 m = diffusion_matrix(p, x);
  const double half_trace = 0.5 * (m.rr + m.ss);
  const double half_gap = 0.5 * (m.rr - m.ss);
  const double disc = std::sqrt(half_gap * half_gap + m.rs * m.rs);
  Eigensystem e;
  e.value_plus = half_trace + disc;
  e.value_minus = half_trace - disc;
  if (m.rs == 0.0) {
    e.vector_plus = m.rr >= m.ss ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    e.vector_minus = m.rr >= m.ss ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
    return e;
  }
  e.vector_plus = Vec2{(half_gap + disc) / m.rs, 1.0};
  e.vector_minus = Vec2{(half_gap - disc) / m.rs, 1.0};
  return e;
}

double generator_apply(const AdcParams& p, const C2Field& f, StateVector x) {
  const Vec2 a = drift(p, x);
  const Sym2 m = diffusion_matrix(p, x);
  const Vec2 g = f.gradient(x);
  const Sym2 h = f.hessian(x);
  return a.r * g.r + a.s * g.s +
         0.5 * (m.rr * h.rr + 2.0 * m.rs * h.rs + m.ss * h.ss);
}

std::vector<C2Field> reversibility_test_family() {
  std::vector<C2Field> fam;
  fam.push_back({[](StateVector) { return 1.0; },
                 [](StateVector) { return Vec2{0.0, 0.0}; },
                 [](StateVector) { return Sym2{0.0, 0.0, 0.0}; }});
  fam.push_back({[](StateVector x) { return x.r; },
                 [](StateVector) { return Vec2{1.0, 0.0}; },
                 [](StateVector) { return Sym2{0.0, 0.0, 0.0}; }});
  fam.push_back({[](StateVector x) { return x.s; },
                 [](StateVector) { return Vec2{0.0, 1.0}; },
                 [](StateVector) { return Sym2{0.0, 0.0, 0.0}; }});
  fam.push_back({[](StateVector x) { return x.r * x.s; },
                 [](StateVector x) { return Vec2{x.s, x.r}; },
                 [](StateVector) { return Sym2{0.0, 1.0, 0.0}; }});
  fam.push_back({[](StateVector x) { return x.r * x.r; },
                 [](StateVector x) { return Vec2{2.0 * x.r, 0.0}; },
                 [](StateVector) { return Sym2{2.0, 0.0, 0.0}; }});
  fam.push_back({[](StateVector x) { return x.s * x.s; },
                 [](StateVector x) { return Vec2{0.0, 2.0 * x.s}; },
                 [](StateVector) { return Sym2{0.0, 0.0, 2.0}; }});
  return fam;
}

double reversibility_defect(const AdcParams& p, int quad_points) {
  const double nu_r = p.r.nu();
  const double nu_s = p.s.nu();
  const double omega_r = p.r.omega();
  const double omega_s = p.s.omega();
  const QuadRule qr = gauss_laguerre(nu_r - 1.0, quad_points);
  const QuadRule qs = gauss_laguerre(nu_s - 1.0, quad_points);
  const double norm = std::exp(-std::lgamma(nu_r) - std::lgamma(nu_s));

  const std::vector<C2Field> fam = reversibility_test_family();
  const std::size_t n = fam.size();

  // weak_form[i][j] = int f_i L f_j dpi
  std::vector<std::vector<double>> weak(n, std::vector<double>(n, 0.0));
  for (int ar = 0; ar < quad_points; ++ar) {
    for (int as = 0; as < quad_points; ++as) {
      const StateVector x{qr.nodes[ar] / omega_r, qs.nodes[as] / omega_s};
      const double w = qr.weights[ar] * qs.weights[as] * norm;
      std::vector<double> values(n), lvals(n);
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = fam[i].value(x);
        lvals[i] = generator_apply(p, fam[i], x);
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          weak[i][j] += w * values[i] * lvals[j];
        }
      }
    }
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      defect = std::max(defect, std::fabs(weak[i][j] - weak[j][i]));
    }
  }
  return defect;
}

}  // namespace adcir
