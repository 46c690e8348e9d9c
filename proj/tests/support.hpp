#pragma once
// Shape builders, random generators and brute-force oracles shared by tests.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "nucseg/components.hpp"
#include "nucseg/graph.hpp"
#include "nucseg/histmodel.hpp"
#include "nucseg/histogram.hpp"
#include "nucseg/partition.hpp"
#include "nucseg/volume.hpp"

namespace testing {

using namespace nucseg;

struct Shape {
  Mask mask;
  Component component;
};

inline Component only_component(const Mask &mask) {
  auto cs = connected_components(mask, 6);
  return cs.empty() ? Component{} : cs.front();
}

/// Digitized ball: voxels whose center lies within physical radius r of the
/// grid center. `margin` empty voxels pad every side.
inline Shape ball(double r, Spacing sp = {}, int margin = 2) {
  const auto half = [&](double s) { return static_cast<std::size_t>(std::ceil(r / s)) + margin; };
  const Extent e{2 * half(sp.x) + 1, 2 * half(sp.y) + 1, 2 * half(sp.z) + 1};
  Mask m(e, sp, 0);
  const double cx = static_cast<double>(e.x / 2), cy = static_cast<double>(e.y / 2),
               cz = static_cast<double>(e.z / 2);
  for (std::size_t z = 0; z < e.z; ++z)
    for (std::size_t y = 0; y < e.y; ++y)
      for (std::size_t x = 0; x < e.x; ++x) {
        const double dx = (static_cast<double>(x) - cx) * sp.x;
        const double dy = (static_cast<double>(y) - cy) * sp.y;
        const double dz = (static_cast<double>(z) - cz) * sp.z;
        if (dx * dx + dy * dy + dz * dz <= r * r) m(x, y, z) = 1;
      }
  return {m, only_component(m)};
}

inline Shape cube(std::size_t side, int margin = 2) {
  const std::size_t n = side + 2 * margin;
  Mask m({n, n, n}, {}, 0);
  for (std::size_t z = margin; z < margin + side; ++z)
    for (std::size_t y = margin; y < margin + side; ++y)
      for (std::size_t x = margin; x < margin + side; ++x) m(x, y, z) = 1;
  return {m, only_component(m)};
}

/// Two balls of radius r along x, joined by a one-voxel-thick bridge along
/// the center line.
inline Shape dumbbell(double r, int gap) {
  const auto R = static_cast<std::size_t>(std::ceil(r));
  const std::size_t m = 2;
  const std::size_t nx = 2 * (2 * R + 1) + static_cast<std::size_t>(gap) + 2 * m;
  const std::size_t ny = 2 * R + 1 + 2 * m;
  Mask mask({nx, ny, ny}, {}, 0);
  const double c = static_cast<double>(ny / 2);
  const double c1 = static_cast<double>(m + R);
  const double c2 = c1 + static_cast<double>(2 * R + 1 + gap);
  for (std::size_t z = 0; z < ny; ++z)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x) {
        const double dy = static_cast<double>(y) - c, dz = static_cast<double>(z) - c;
        const double d1 = static_cast<double>(x) - c1, d2 = static_cast<double>(x) - c2;
        if (d1 * d1 + dy * dy + dz * dz <= r * r || d2 * d2 + dy * dy + dz * dz <= r * r) {
          mask(x, y, z) = 1;
        }
        if (dy == 0 && dz == 0 && static_cast<double>(x) > c1 && static_cast<double>(x) < c2) {
          mask(x, y, z) = 1;
        }
      }
  return {mask, only_component(mask)};
}

/// Connected random graph: a random spanning tree plus extra edges, integer
/// weights in [1, max_weight].
inline WeightedGraph random_graph(std::size_t n, double extra_density, int max_weight,
                                  std::mt19937_64 &rng) {
  std::vector<Edge> edges;
  std::uniform_int_distribution<int> w(1, max_weight);
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), double(w(rng))});
  }
  std::bernoulli_distribution extra(extra_density);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (extra(rng)) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), double(w(rng))});
  return WeightedGraph::from_edges(n, edges);
}

/// Minimum cut over all balanced bipartitions, by enumeration.
inline double brute_force_min_cut(const WeightedGraph &g, double epsilon) {
  const std::size_t n = g.node_count();
  const auto edges = g.edges();
  const NodeWeight cap = max_block_weight(g.total_node_weight(), epsilon);
  double best = std::numeric_limits<double>::infinity();
  // Node 0 stays on side 0; the mirrored assignments give the same cuts.
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n - 1)); ++bits) {
    NodeWeight w1 = 0;
    for (std::size_t v = 1; v < n; ++v)
      if (bits >> (v - 1) & 1) w1 += g.node_weight(static_cast<NodeId>(v));
    const NodeWeight w0 = g.total_node_weight() - w1;
    if (w1 == 0 || w0 == 0 || w0 > cap || w1 > cap) continue;
    double cut = 0.0;
    for (const auto &e : edges) {
      const bool su = e.u != 0 && (bits >> (e.u - 1) & 1);
      const bool sv = e.v != 0 && (bits >> (e.v - 1) & 1);
      if (su != sv) cut += e.weight;
    }
    best = std::min(best, cut);
  }
  return best;
}


/// Exhaustive Otsu: for every split t, class sums recomputed from scratch and
/// the between-class criterion (n1 S0 - n0 S1)^2 / (n0 n1) compared exactly.
inline int brute_force_otsu(const std::vector<std::uint64_t> &counts) {
  using i128 = __int128;
  int best = -1;
  i128 best_num = 0, best_den = 1;
  for (std::size_t t = 0; t + 1 < counts.size(); ++t) {
    i128 n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const i128 c = counts[i];
      if (i <= t) {
        n0 += c;
        s0 += c * static_cast<i128>(i);
      } else {
        n1 += c;
        s1 += c * static_cast<i128>(i);
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const i128 diff = n1 * s0 - n0 * s1;
    const i128 num = diff * diff, den = n0 * n1;
    if (best < 0 || num * best_den > best_num * den) {
      best = static_cast<int>(t);
      best_num = num;
      best_den = den;
    }
  }
  return best;
}

/// Draws `n` rounded samples from the NB + IB + F mixture. p_b is taken as
/// the remainder 1 - p_f - IB mass.
inline Histogram sample_histogram(const HistogramModel &m, std::size_t n, std::mt19937_64 &rng) {
  const double span = m.mu_f - m.mu_b;
  const double lo = 2.0 * m.sigma_b;
  const double log_eps = std::log(lo / span);
  const double ib_mass = lo < span ? m.alpha * m.p_f * log_eps * log_eps : 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nb(m.mu_b, m.sigma_b), f(m.mu_f, m.sigma_f);
  const double peak = lo < span ? std::log(span / lo) / lo : 0.0;
  std::vector<std::uint64_t> counts;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = u(rng);
    double x;
    if (r < m.p_f) {
      x = f(rng);
    } else if (r < m.p_f + ib_mass) {
      // Rejection sampling of log(span / d) / d on [lo, span).
      for (;;) {
        const double d = lo + (span - lo) * u(rng);
        if (u(rng) * peak <= std::log(span / d) / d) {
          x = m.mu_b + d;
          break;
        }
      }
    } else {
      x = nb(rng);
    }
    const auto level = static_cast<std::size_t>(std::max(0.0, std::round(x)));
    if (level >= counts.size()) counts.resize(level + 1, 0);
    ++counts[level];
  }
  return Histogram(std::move(counts));
}

/// A random model in the regime the pipeline meets: clearly separated
/// classes, minority foreground, weak illumination term.
inline HistogramModel random_model(std::mt19937_64 &rng) {
  auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  HistogramModel m;
  m.mu_b = u(40, 160);
  m.sigma_b = u(4, 15);
  m.mu_f = m.mu_b + u(10, 20) * m.sigma_b;
  m.sigma_f = u(8, 30);
  m.p_f = u(0.1, 0.4);
  m.alpha = u(0.0, 0.02);
  const double log_eps = std::log(2.0 * m.sigma_b / (m.mu_f - m.mu_b));
  m.p_b = 1.0 - m.p_f - m.alpha * m.p_f * log_eps * log_eps;
  return m;
}

}  // namespace testing
