#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nucseg/histmodel.hpp"
#include "nucseg/volume.hpp"

namespace nucseg {

enum class ThresholdMethod { Otsu, ModelThreshold };

[[nodiscard]] std::string to_string(ThresholdMethod method);
[[nodiscard]] ThresholdMethod parse_threshold_method(const std::string &name);

struct BinarizationConfig {
  ThresholdMethod method = ThresholdMethod::Otsu;
  double sigma_s = 0.0;  ///< Gaussian prefilter, voxel units
  int slabs = 1;         ///< number of consecutive-slice groups, m
  /// Fit the histogram model per slab even when thresholding with Otsu
  /// (needed for probability edge weights).
  bool fit_model = false;

  void validate(std::size_t depth) const;
};

struct SlabReport {
  std::size_t z_begin = 0;
  std::size_t z_end = 0;  ///< exclusive
  int threshold = 0;
  std::optional<HistogramModel> model;
};

void to_json(nlohmann::json &j, const SlabReport &slab);

struct Binarization {
  Mask mask;
  /// Prefiltered, quantized gray levels the thresholds were applied to.
  VolumeF32 smoothed;
  std::vector<SlabReport> slabs;

  /// Slab holding slice z.
  [[nodiscard]] const SlabReport &slab_of(std::size_t z) const;
};

/// [begin, end) slice ranges of `slabs` near-equal groups; the first
/// depth % slabs groups hold one extra slice.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> slab_ranges(std::size_t depth,
                                                                           int slabs);

/// Slab-wise binarization: each group of slices is smoothed on its own,
/// quantized to integer gray levels, and thresholded; voxels strictly above
/// their slab's threshold become foreground.
[[nodiscard]] Binarization binarize(const VolumeF32 &volume, const BinarizationConfig &config);

}  // namespace nucseg
