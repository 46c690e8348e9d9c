#pragma once

#include <array>
#include <span>
#include <vector>

#include "nucseg/components.hpp"
#include "nucseg/volume.hpp"

namespace nucseg {

/// Cauchy-Crofton edge weights for a grid neighborhood on an anisotropic grid.
///
/// Every neighborhood offset e owns the spherical Voronoi cell of its scaled
/// direction among all offsets of the neighborhood; `solid_angle[k]` is that
/// cell's solid angle. Lines of family k are spaced delta_rho = cell volume /
/// |e_phys| apart, and the weight is omega = solid_angle * delta_rho / pi.
/// Summing omega over the cut pairs of a surface (each unordered pair once)
/// approximates its area.
///
/// With 26 directions the plain Voronoi quadrature is exact on average over
/// plane orientations but reads axis-aligned planes about 7% short (faces of
/// boxes, flat slabs). For the 26-neighborhood the per-direction coefficients
/// solid_angle / pi are therefore nudged toward reading the three axis planes
/// exactly, by the smallest relative change that keeps the orientation
/// average exact. The step is cut short where a coefficient would drop below
/// half its Voronoi value, which only happens on strongly anisotropic grids.
/// `solid_angle` keeps the Voronoi values.
struct CutMetricWeights {
  Spacing spacing;
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> solid_angle;
  std::vector<double> weight;

  /// Weight of the offset at position k of `offsets`.
  [[nodiscard]] double operator[](std::size_t k) const { return weight[k]; }
  /// Sum of all weights; the surface of a lone voxel.
  [[nodiscard]] double total() const;
};

inline constexpr std::size_t kDefaultSphereSamples = 1'000'000;

/// Weights for an arbitrary neighborhood (offsets must come in +/- pairs).
/// Solid angles are estimated from `samples` Fibonacci-lattice points.
[[nodiscard]] CutMetricWeights cut_metric_weights(std::span<const std::array<int, 3>> offsets,
                                                  const Spacing &spacing,
                                                  std::size_t samples = kDefaultSphereSamples);

/// Weights for the 26-neighborhood, ordered as kAllOffsets.
[[nodiscard]] CutMetricWeights cut_metric_weights(const Spacing &spacing,
                                                  std::size_t samples = kDefaultSphereSamples);

/// Sum of omega over unordered 26-adjacent pairs (p, q), p in the component,
/// q outside it or outside `extent`. `weights` must be the 26-neighborhood.
[[nodiscard]] double surface_area(const Component &component, const CutMetricWeights &weights,
                                  const Extent &extent);

/// n * dx * dy * dz.
[[nodiscard]] inline double volume_of(const Component &component, const Spacing &spacing) {
  return static_cast<double>(component.size()) * spacing.voxel_volume();
}

/// pi^(1/3) (6 V)^(2/3) / A.
[[nodiscard]] double sphericity(double volume, double area);

[[nodiscard]] double sphericity(const Component &component, const CutMetricWeights &weights,
                                const Extent &extent);

}  // namespace nucseg
