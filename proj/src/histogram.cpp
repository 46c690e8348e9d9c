#include "nucseg/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nucseg/error.hpp"

namespace nucseg {

Histogram::Histogram(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)),
      total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {
  if (total_ == 0) {
    throw DataError("histogram: empty (no samples)");
  }
}

std::size_t Histogram::occupied_levels() const {
  return static_cast<std::size_t>(
      std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }));
}

int otsu_threshold(const Histogram &histogram) {
  if (histogram.occupied_levels() < 2) {
    throw DataError("histogram: fewer than two occupied gray levels, no threshold exists");
  }
  const auto &c = histogram.counts();
  using wide = __int128;
  const wide n_total = histogram.total();
  wide s_total = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s_total += static_cast<wide>(i) * c[i];
  }

  // sigma_B^2 * N^2 = (N * S0 - n0 * S)^2 / (n0 * n1); the numerator is exact.
  wide n0 = 0;
  wide s0 = 0;
  long double best = -1.0L;
  int best_t = -1;
  for (std::size_t t = 0; t + 1 < c.size(); ++t) {
    n0 += c[t];
    s0 += static_cast<wide>(t) * c[t];
    const wide n1 = n_total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const auto diff = static_cast<long double>(n_total * s0 - n0 * s_total);
    const long double score =
        diff * diff / (static_cast<long double>(n0) * static_cast<long double>(n1));
    if (score > best) {
      best = score;
      best_t = static_cast<int>(t);
    }
  }
  return best_t;
}

double isodata_threshold(const Histogram &histogram, int max_iterations) {
  if (histogram.occupied_levels() < 2) {
    throw DataError("histogram: fewer than two occupied gray levels, cannot initialize");
  }
  const auto &c = histogram.counts();
  double t = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    t += static_cast<double>(i) * histogram.frequency(i);
  }
  for (int iter = 0; iter < max_iterations; ++iter) {
    double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto w = static_cast<double>(c[i]);
      if (static_cast<double>(i) <= t) {
        n0 += w;
        s0 += w * static_cast<double>(i);
      } else {
        n1 += w;
        s1 += w * static_cast<double>(i);
      }
    }
    if (n0 == 0 || n1 == 0) {
      throw DataError("histogram: isodata threshold left one class empty");
    }
    const double next = 0.5 * (s0 / n0 + s1 / n1);
    const bool done = std::abs(next - t) < 1e-9;
    t = next;
    if (done) break;
  }
  return t;
}

}  // namespace nucseg
