#pragma once

// Special functions needed by the square-root diffusion transition law:
// regularized incomplete gamma, modified Bessel I of real order > -1, the
// Gamma distribution, and the noncentral chi-square CDF.

#include <cstddef>

namespace adcir {

// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
double lower_gamma_regularized(double a, double x);
double upper_gamma_regularized(double a, double x);

// log I_alpha(y) for alpha > -1, y >= 0. Power series for y <= 30, scaled
// asymptotic expansion above, with a rescaled-series fallback when the
// asymptotic terms fail to converge (large order at moderate argument).
double log_bessel_i(double alpha, double y);
double bessel_i(double alpha, double y);

// Crossover argument between the series and asymptotic branches.
inline constexpr double kBesselSeriesCutoff = 30.0;

// Gamma(shape, rate) density and CDF.
double gamma_pdf(double x, double shape, double rate);
double gamma_cdf(double x, double shape, double rate);

// CDF of the noncentral chi-square law with `dof` degrees of freedom and
// noncentrality `lambda`, as the Poisson-weighted mixture of central
// chi-square CDFs. The mixture is truncated once the unaccounted Poisson
// mass drops below `tail_tol`.
double noncentral_chi_square_cdf(double y, double dof, double lambda,
                                 double tail_tol = 1e-12);

}  // namespace adcir
