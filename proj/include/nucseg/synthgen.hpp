#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nucseg/volume.hpp"

namespace nucseg {

struct SceneConfig {
  Extent size{64, 64, 32};
  Spacing spacing;
  int nucleus_count = 10;
  std::array<double, 3> semi_axis_min{6.0, 6.0, 6.0};  ///< physical units
  std::array<double, 3> semi_axis_max{8.0, 8.0, 8.0};
  double clustering = 0.0;  ///< probability of touching a prior nucleus
  double mu_b = 100.0;
  double mu_f = 400.0;
  double noise_sigma = 0.0;
  std::array<double, 3> psf_sigma{0.0, 0.0, 0.0};  ///< voxel units
  std::uint64_t seed = 0;
  /// Background level at the last slice; the background ramps linearly in z
  /// from mu_b. Defaults to mu_b (flat).
  std::optional<double> background_end;
  /// Foreground contrast multiplier at the last slice, ramping from 1 at z = 0.
  double attenuation = 1.0;

  void validate() const;
  [[nodiscard]] std::size_t size_of(int axis) const {
    return axis == 0 ? size.x : (axis == 1 ? size.y : size.z);
  }
};

struct Ellipsoid {
  std::array<double, 3> center{};  ///< physical coordinates
  std::array<double, 3> semi_axes{};
  std::uint32_t label = 0;

  [[nodiscard]] bool contains(const std::array<double, 3> &point) const;
  /// Center-to-surface distance along unit direction u.
  [[nodiscard]] double radius_along(const std::array<double, 3> &u) const;
  [[nodiscard]] double analytic_volume() const;
};

struct Scene {
  VolumeU16 intensity;
  LabelVolume truth;
  std::vector<Ellipsoid> nuclei;
};

/// Places nucleus_count random axis-aligned ellipsoids (clustered ones touch a
/// randomly chosen earlier nucleus, all others keep a one-voxel gap), paints
/// truth labels 1..n with later labels winning, then renders intensities:
/// background plus contrast times occupancy, PSF blur, additive Gaussian
/// noise, rounded and clamped to u16. Throws DataError when a nucleus cannot
/// be placed within 10^4 attempts.
[[nodiscard]] Scene generate(const SceneConfig &config);

}  // namespace nucseg
