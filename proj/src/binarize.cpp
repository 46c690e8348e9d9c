#include "nucseg/binarize.hpp"

#include <cmath>

#include "nucseg/error.hpp"
#include "nucseg/filter.hpp"

namespace nucseg {

std::string to_string(ThresholdMethod method) {
  return method == ThresholdMethod::Otsu ? "otsu" : "model_threshold";
}

ThresholdMethod parse_threshold_method(const std::string &name) {
  if (name == "otsu") return ThresholdMethod::Otsu;
  if (name == "model_threshold" || name == "model") return ThresholdMethod::ModelThreshold;
  throw InvalidArgument("binarization.method: unknown value '" + name + "'");
}

void BinarizationConfig::validate(std::size_t depth) const {
  if (!(sigma_s >= 0.0)) {
    throw InvalidArgument("binarization.sigma_s: must be >= 0");
  }
  if (slabs < 1) {
    throw InvalidArgument("binarization.m: must be >= 1");
  }
  if (static_cast<std::size_t>(slabs) > depth) {
    throw InvalidArgument("binarization.m: exceeds the number of slices (" +
                          std::to_string(depth) + ")");
  }
}

void to_json(nlohmann::json &j, const SlabReport &slab) {
  j = nlohmann::json{{"z_begin", slab.z_begin}, {"z_end", slab.z_end}, {"threshold", slab.threshold}};
  if (slab.model) {
    j["model"] = *slab.model;
  }
}

const SlabReport &Binarization::slab_of(std::size_t z) const {
  for (const auto &s : slabs) {
    if (z >= s.z_begin && z < s.z_end) return s;
  }
  throw InvalidArgument("slice index outside every slab");
}

std::vector<std::pair<std::size_t, std::size_t>> slab_ranges(std::size_t depth, int slabs) {
  if (slabs < 1 || static_cast<std::size_t>(slabs) > depth) {
    throw InvalidArgument("binarization.m: must lie in [1, S_z]");
  }
  const auto m = static_cast<std::size_t>(slabs);
  const std::size_t base = depth / m;
  const std::size_t extra = depth % m;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t z = 0;
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t len = base + (s < extra ? 1 : 0);
    out.emplace_back(z, z + len);
    z += len;
  }
  return out;
}

Binarization binarize(const VolumeF32 &volume, const BinarizationConfig &config) {
  if (volume.empty()) {
    throw DataError("binarize: empty volume");
  }
  const auto &e = volume.extent();
  config.validate(e.z);

  Binarization out;
  out.mask = Mask(e, volume.spacing(), 0);
  out.smoothed = VolumeF32(e, volume.spacing(), 0.0f);
  const std::size_t plane = e.x * e.y;

  for (const auto &[z0, z1] : slab_ranges(e.z, config.slabs)) {
    const Extent slab_extent{e.x, e.y, z1 - z0};
    std::vector<float> values(volume.data().begin() + static_cast<std::ptrdiff_t>(z0 * plane),
                              volume.data().begin() + static_cast<std::ptrdiff_t>(z1 * plane));
    VolumeF32 slab(slab_extent, volume.spacing(), std::move(values));
    slab = gaussian_smooth(slab, config.sigma_s);

    std::vector<std::uint32_t> levels(slab.size());
    for (std::size_t i = 0; i < slab.size(); ++i) {
      const float v = std::max(std::round(slab[i]), 0.0f);
      slab[i] = v;
      levels[i] = static_cast<std::uint32_t>(v);
    }
    const auto histogram = Histogram::of<std::uint32_t>(levels);

    SlabReport report;
    report.z_begin = z0;
    report.z_end = z1;
    if (config.method == ThresholdMethod::ModelThreshold || config.fit_model) {
      report.model = em_fit(histogram, iterative_threshold_init(histogram));
    }
    report.threshold = config.method == ThresholdMethod::Otsu ? otsu_threshold(histogram)
                                                              : model_threshold(*report.model);

    for (std::size_t i = 0; i < slab.size(); ++i) {
      out.smoothed[z0 * plane + i] = slab[i];
      out.mask[z0 * plane + i] = levels[i] > static_cast<std::uint32_t>(report.threshold) ? 1 : 0;
    }
    out.slabs.push_back(std::move(report));
  }
  return out;
}

}  // namespace nucseg
