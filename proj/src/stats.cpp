#include "adcir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adcir {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::vector<double> fd_edges(std::span<const double> samples, int max_bins) {
  if (samples.size() < 2) throw std::invalid_argument("histogram: need >= 2 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double n_cbrt = std::cbrt(static_cast<double>(sorted.size()));
  double width = 2.0 * iqr / n_cbrt;
  int bins;
  if (width <= 0.0 || hi <= lo) {
    bins = 1;
  } else {
    bins = static_cast<int>(std::ceil((hi - lo) / width));
    bins = std::clamp(bins, 1, max_bins);
  }
  std::vector<double> edges(bins + 1);
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  for (int i = 0; i <= bins; ++i) {
    edges[i] = lo + span * static_cast<double>(i) / bins;
  }
  edges.back() = lo + span;  // exact upper edge
  return edges;
}

std::size_t bin_index(const std::vector<double>& edges, double v) {
  // clamp into [first, last]; samples sit inside by construction for the
  // fd rules, fixed-edge callers accept edge clamping
  if (v <= edges.front()) return 0;
  if (v >= edges.back()) return edges.size() - 2;
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

}  // namespace

double ks_critical_value(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks: alpha must be in (0, 1)");
  }
  if (n == 0) throw std::invalid_argument("ks: empty sample");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf, double alpha) {
  if (samples.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    dist = std::max({dist, hi, lo});
  }
  KsResult r;
  r.distance = dist;
  r.alpha = alpha;
  r.n = samples.size();
  r.critical_value = ks_critical_value(alpha, samples.size());
  return r;
}

Histogram1D histogram_fixed(std::span<const double> samples,
                            const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram: need >= 2 edges");
  if (samples.empty()) throw std::invalid_argument("histogram: empty sample");
  Histogram1D h;
  h.edges = edges;
  h.mass.assign(edges.size() - 1, 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (double v : samples) h.mass[bin_index(edges, v)] += w;
  return h;
}

Histogram1D histogram_fd(std::span<const double> samples, int max_bins) {
  return histogram_fixed(samples, fd_edges(samples, max_bins));
}

Histogram2D histogram2d_fixed(std::span<const double> r,
                              std::span<const double> s,
                              const std::vector<double>& r_edges,
                              const std::vector<double>& s_edges) {
  if (r.size() != s.size() || r.empty()) {
    throw std::invalid_argument("histogram2d: component sizes must match");
  }
  Histogram2D h;
  h.r_edges = r_edges;
  h.s_edges = s_edges;
  const std::size_t nr = r_edges.size() - 1;
  const std::size_t ns = s_edges.size() - 1;
  h.mass.assign(nr * ns, 0.0);
  const double w = 1.0 / static_cast<double>(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    h.mass[bin_index(r_edges, r[i]) * ns + bin_index(s_edges, s[i])] += w;
  }
  return h;
}

Histogram2D histogram2d_fd(std::span<const double> r,
                           std::span<const double> s, int max_bins) {
  return histogram2d_fixed(r, s, fd_edges(r, max_bins), fd_edges(s, max_bins));
}

Summary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
  CompensatedSum sum;
  for (double v : samples) sum.add(v);
  const double n = static_cast<double>(samples.size());
  Summary out;
  out.n = samples.size();
  out.mean = sum.value() / n;
  if (samples.size() > 1) {
    CompensatedSum sq;
    for (double v : samples) {
      const double d = v - out.mean;
      sq.add(d * d);
    }
    out.variance = sq.value() / (n - 1.0);
    out.std_error = std::sqrt(out.variance / n);
  }
  return out;
}

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("correlation: need matching samples, n >= 2");
  }
  const Summary sa = summarize(a);
  const Summary sb = summarize(b);
  CompensatedSum cross;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cross.add((a[i] - sa.mean) * (b[i] - sb.mean));
  }
  const double n = static_cast<double>(a.size());
  const double cov = cross.value() / (n - 1.0);
  return cov / std::sqrt(sa.variance * sb.variance);
}

}  // namespace adcir
