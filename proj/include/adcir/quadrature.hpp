#pragma once

// Quadrature rules: generalized Gauss-Laguerre nodes for integrals against
// x^alpha e^{-x} on (0, inf), and an incremental composite Simpson rule for
// uniformly sampled integrands.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace adcir {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights for \int_0^inf x^alpha e^{-x} f(x) dx, alpha > -1.
QuadRule gauss_laguerre(double alpha, int n);

// Composite Simpson over already-collected uniform samples; the sample
// count must be odd (even interval count).
double simpson_integral(std::span<const double> samples, double h);

// Streaming variant: push one sample per grid instant, read the integral
// whenever the interval count is even.
class SimpsonAccumulator {
 public:
  explicit SimpsonAccumulator(double h) : h_(h) {
    if (!(h > 0.0)) throw std::invalid_argument("simpson: step must be > 0");
  }

  void push(double f) {
    if (count_ == 0) {
      first_ = f;
    } else if (count_ % 2 == 1) {
      sum_odd_ += f;
    } else {
      sum_even_ += f;
    }
    last_ = f;
    ++count_;
  }

  std::int64_t intervals() const { return count_ == 0 ? 0 : count_ - 1; }
  bool ready() const { return count_ >= 3 && intervals() % 2 == 0; }

  double value() const {
    if (!ready()) throw std::logic_error("simpson: interval count is odd");
    // sum_even_ includes the final sample; the composite rule wants interior
    // even samples doubled and the last sample taken once.
    return h_ / 3.0 * (first_ + 4.0 * sum_odd_ + 2.0 * sum_even_ - last_);
  }

 private:
  double h_;
  double first_ = 0.0;
  double last_ = 0.0;
  double sum_odd_ = 0.0;
  double sum_even_ = 0.0;
  std::int64_t count_ = 0;
};

}  // namespace adcir
