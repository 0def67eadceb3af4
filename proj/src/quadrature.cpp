#include "adcir/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace adcir {

namespace {

// L_n^alpha(x) and L_{n-1}^alpha(x) by upward recurrence.
void laguerre_pair(int n, double alpha, double x, double* ln, double* lnm1) {
  double p0 = 1.0;
  double p1 = 1.0 + alpha - x;
  if (n == 0) {
    *ln = p0;
    *lnm1 = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 =
        ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  *ln = p1;
  *lnm1 = p0;
}

}  // namespace

QuadRule gauss_laguerre(double alpha, int n) {
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre: alpha must be > -1");
  if (n < 1) throw std::invalid_argument("gauss_laguerre: need n >= 1");

  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double log_norm = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * n + 1.8 * alpha);
    } else if (i == 1) {
      z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * n);
    } else {
      const double ai = i - 1.0;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai) +
            1.26 * ai * alpha / (1.0 + 3.5 * ai)) *
           (z - rule.nodes[i - 2]) / (1.0 + 0.3 * alpha);
    }
    double ln = 0.0, lnm1 = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      laguerre_pair(n, alpha, z, &ln, &lnm1);
      const double deriv = (n * ln - (n + alpha) * lnm1) / z;
      const double dz = ln / deriv;
      z -= dz;
      if (std::fabs(dz) <= 1e-14 * (1.0 + std::fabs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_laguerre: Newton failed");
    laguerre_pair(n, alpha, z, &ln, &lnm1);
    const double deriv = (n * ln - (n + alpha) * lnm1) / z;
    rule.nodes[i] = z;
    // w = Gamma(n+alpha+1) / (n! * x * [L_n'(x)]^2)
    rule.weights[i] = std::exp(log_norm) / (z * deriv * deriv);
  }
  return rule;
}

double simpson_integral(std::span<const double> samples, double h) {
  if (samples.size() < 3 || samples.size() % 2 == 0) {
    throw std::invalid_argument("simpson: need an odd sample count >= 3");
  }
  SimpsonAccumulator acc(h);
  for (double f : samples) acc.push(f);
  return acc.value();
}

}  // namespace adcir
