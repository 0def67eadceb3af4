#pragma once

// Counter-based splittable random streams. A stream is identified by the
// mixed hash of up to four key words (seed, path, step, slot), so changing
// the number of paths or steps in a simulation never reshuffles the variates
// of the paths that are kept. Successive outputs follow the SplitMix64
// counter sequence.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adcir {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(derive(seed, 0, 0, 0)) {}

  static RandomStream keyed(std::uint64_t seed, std::uint64_t a,
                            std::uint64_t b = 0, std::uint64_t c = 0) {
    RandomStream s(0);
    s.state_ = derive(seed, a, b, c);
    s.has_spare_ = false;
    return s;
  }

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Gamma(shape, scale 1) by Marsaglia-Tsang, with the Johnk-style
  // boost for shape < 1.
  double next_gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
    if (shape < 1.0) {
      const double g = next_gamma(shape + 1.0);
      return g * std::pow(next_unit(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_unit();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Poisson(mean): multiplicative inversion below 12, Hormann's PTRS above.
  std::uint64_t next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 12.0) {
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double product = next_unit();
      while (product > limit) {
        ++k;
        product *= next_unit();
      }
      return k;
    }
    return poisson_ptrs(mean);
  }

 private:
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = detail::mix64(seed + detail::kGolden);
    h = detail::mix64(h ^ (a + 2 * detail::kGolden));
    h = detail::mix64(h ^ (b + 3 * detail::kGolden));
    h = detail::mix64(h ^ (c + 4 * detail::kGolden));
    return h;
  }

  std::uint64_t poisson_ptrs(double mu) {
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
      const double u = next_unit() - 0.5;
      const double v = next_unit();
      const double us = 0.5 - std::fabs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          kf * log_mu - mu - std::lgamma(kf + 1.0)) {
        return static_cast<std::uint64_t>(kf);
      }
    }
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// The two normals consumed by one simulation step of one path. Keying by
// (seed, path, step, slot) keeps every draw addressable.
struct NormalPair {
  double first;
  double second;
};

inline NormalPair normal_pair(std::uint64_t seed, std::uint64_t path,
                              std::uint64_t step, std::uint64_t slot = 0) {
  RandomStream s = RandomStream::keyed(seed, path, step, slot);
  NormalPair z{};
  z.first = s.next_normal();
  z.second = s.next_normal();
  return z;
}

}  // namespace adcir
