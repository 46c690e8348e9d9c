#include "nucseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nucseg/error.hpp"

namespace nucseg {

namespace {

// Solves the n x n system a x = b in place (partial pivoting).
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < N; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::array<double, N> x{};
  for (std::size_t c = N; c-- > 0;) {
    double v = b[c];
    for (std::size_t j = c + 1; j < N; ++j) v -= a[c][j] * x[j];
    x[c] = v / a[c][c];
  }
  return x;
}

// A plane with unit normal n reads sum_k coef_k max(0, n . dir_k) per unit
// area. Its average over all orientations is sum_k coef_k / 4 because each
// max(0, n . dir) averages to 1/4. Constraints: that average stays 1 and the
// planes normal to x, y and z read 1. The change minimizes
// sum (delta_k / coef_k)^2.
void correct_axis_planes(const std::vector<std::array<double, 3>> &dir, std::vector<double> &coef) {
  const std::size_t k = coef.size();
  std::array<std::vector<double>, 4> rows;
  std::array<double, 4> residual{};
  for (auto &r : rows) r.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    rows[0][i] = 0.25;
    // Mean of the +axis and -axis readings keeps opposite offsets equal.
    for (int a = 0; a < 3; ++a) rows[1 + a][i] = 0.5 * std::abs(dir[i][a]);
  }
  for (std::size_t r = 0; r < 4; ++r) {
    residual[r] = 1.0;
    for (std::size_t i = 0; i < k; ++i) residual[r] -= rows[r][i] * coef[i];
  }
  std::array<std::array<double, 4>, 4> gram{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t i = 0; i < k; ++i) gram[r][c] += rows[r][i] * coef[i] * coef[i] * rows[c][i];
  const auto lambda = solve(gram, residual);
  std::vector<double> delta(k, 0.0);
  double step = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < 4; ++r) delta[i] += coef[i] * coef[i] * rows[r][i] * lambda[r];
    if (delta[i] < -0.5 * coef[i]) step = std::min(step, -0.5 * coef[i] / delta[i]);
  }
  for (std::size_t i = 0; i < k; ++i) coef[i] += step * delta[i];
}

}  // namespace

double CutMetricWeights::total() const { return std::accumulate(weight.begin(), weight.end(), 0.0); }

CutMetricWeights cut_metric_weights(std::span<const std::array<int, 3>> offsets,
                                    const Spacing &spacing, std::size_t samples) {
  if (!(spacing.x > 0 && spacing.y > 0 && spacing.z > 0)) {
    throw InvalidArgument("spacing: all components must be > 0");
  }
  if (offsets.empty() || samples == 0) {
    throw InvalidArgument("cut metric: need offsets and at least one sample");
  }
  const std::size_t k = offsets.size();
  std::vector<std::array<double, 3>> dir(k);
  std::vector<double> length(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double x = offsets[i][0] * spacing.x;
    const double y = offsets[i][1] * spacing.y;
    const double z = offsets[i][2] * spacing.z;
    length[i] = std::sqrt(x * x + y * y + z * z);
    dir[i] = {x / length[i], y / length[i], z / length[i]};
  }

  // Fibonacci lattice: quasi-uniform points, each standing for 4 pi / N.
  std::vector<std::size_t> hits(k, 0);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const auto n = static_cast<double>(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double z = 1.0 - (2.0 * static_cast<double>(s) + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(s);
    const double x = r * std::cos(phi);
    const double y = r * std::sin(phi);
    std::size_t best = 0;
    double best_dot = -2.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = x * dir[i][0] + y * dir[i][1] + z * dir[i][2];
      if (d > best_dot) {
        best_dot = d;
        best = i;
      }
    }
    ++hits[best];
  }

  CutMetricWeights out;
  out.spacing = spacing;
  out.offsets.assign(offsets.begin(), offsets.end());
  out.solid_angle.resize(k);
  out.weight.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.solid_angle[i] = 4.0 * std::numbers::pi * static_cast<double>(hits[i]) / n;
  }
  // Opposite directions own congruent cells; average away the sampling noise.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (offsets[j][0] == -offsets[i][0] && offsets[j][1] == -offsets[i][1] &&
          offsets[j][2] == -offsets[i][2]) {
        const double mean = 0.5 * (out.solid_angle[i] + out.solid_angle[j]);
        out.solid_angle[i] = out.solid_angle[j] = mean;
      }
    }
  }
  std::vector<double> coef(k);
  for (std::size_t i = 0; i < k; ++i) coef[i] = out.solid_angle[i] / std::numbers::pi;
  if (k == kAllOffsets.size()) correct_axis_planes(dir, coef);
  const double cell = spacing.voxel_volume();
  for (std::size_t i = 0; i < k; ++i) {
    const double delta_rho = cell / length[i];
    out.weight[i] = coef[i] * delta_rho;
  }
  return out;
}

CutMetricWeights cut_metric_weights(const Spacing &spacing, std::size_t samples) {
  return cut_metric_weights(kAllOffsets, spacing, samples);
}

double surface_area(const Component &component, const CutMetricWeights &weights,
                    const Extent &extent) {
  if (weights.offsets.size() != kAllOffsets.size()) {
    throw InvalidArgument("surface_area: needs 26-neighborhood cut metric weights");
  }
  const BoxIndex index(component.voxels);
  double area = 0.0;
  for (const auto &v : component.voxels) {
    for (std::size_t k = 0; k < weights.offsets.size(); ++k) {
      const auto &o = weights.offsets[k];
      const std::int64_t x = v.x + o[0], y = v.y + o[1], z = v.z + o[2];
      const bool inside = x >= 0 && y >= 0 && z >= 0 && x < static_cast<std::int64_t>(extent.x) &&
                          y < static_cast<std::int64_t>(extent.y) &&
                          z < static_cast<std::int64_t>(extent.z);
      if (!inside || index.find(x, y, z) < 0) {
        area += weights.weight[k];
      }
    }
  }
  return area;
}

double sphericity(double volume, double area) {
  if (!(area > 0.0)) {
    throw InvalidArgument("sphericity: surface area must be > 0");
  }
  return std::cbrt(std::numbers::pi) * std::pow(6.0 * volume, 2.0 / 3.0) / area;
}

double sphericity(const Component &component, const CutMetricWeights &weights,
                  const Extent &extent) {
  return sphericity(volume_of(component, weights.spacing), surface_area(component, weights, extent));
}

}  // namespace nucseg
