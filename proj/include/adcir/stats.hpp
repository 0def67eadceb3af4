#pragma once

// Sample statistics used by the verification suites: one-sample
// Kolmogorov-Smirnov distance against an analytic CDF, Freedman-Diaconis
// histograms, and compensated summation of moments.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace adcir {

struct KsResult {
  double distance = 0.0;
  double critical_value = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  bool pass() const { return distance < critical_value; }
};

// Asymptotic one-sample two-sided critical value c(alpha)/sqrt(n) with
// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_value(double alpha, std::size_t n);

KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf,
                 double alpha = 0.01);

struct Histogram1D {
  std::vector<double> edges;  // size bins + 1
  std::vector<double> mass;   // size bins, sums to 1
};

struct Histogram2D {
  std::vector<double> r_edges;
  std::vector<double> s_edges;
  std::vector<double> mass;  // row-major, r index major
};

// Freedman-Diaconis bin width, capped at max_bins bins.
Histogram1D histogram_fd(std::span<const double> samples, int max_bins = 200);
Histogram1D histogram_fixed(std::span<const double> samples,
                            const std::vector<double>& edges);
Histogram2D histogram2d_fd(std::span<const double> r,
                           std::span<const double> s, int max_bins = 200);
Histogram2D histogram2d_fixed(std::span<const double> r,
                              std::span<const double> s,
                              const std::vector<double>& r_edges,
                              const std::vector<double>& s_edges);

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
  std::size_t n = 0;
};

// Neumaier-compensated accumulation; the result does not depend on how the
// samples were produced or chunked upstream, only on their order here.
Summary summarize(std::span<const double> samples);

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b);

// Compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace adcir
