#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "nucseg/error.hpp"

namespace nucseg {

/// Number of voxels along x, y and z.
struct Extent {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  [[nodiscard]] std::size_t voxel_count() const { return x * y * z; }
  bool operator==(const Extent &) const = default;
};

/// Physical length of one voxel step along each axis.
struct Spacing {
  double x = 1.0;
  double y = 1.0;
  double z = 1.0;

  [[nodiscard]] double voxel_volume() const { return x * y * z; }
  [[nodiscard]] double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  bool operator==(const Spacing &) const = default;
};

struct VoxelCoord {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  bool operator==(const VoxelCoord &) const = default;
};

enum class PixelDistance { D6, D26 };

[[nodiscard]] inline double physical_distance(VoxelCoord p, VoxelCoord q, const Spacing &spacing) {
  const double dx = (p.x - q.x) * spacing.x;
  const double dy = (p.y - q.y) * spacing.y;
  const double dz = (p.z - q.z) * spacing.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

[[nodiscard]] inline int pixel_distance(VoxelCoord p, VoxelCoord q, PixelDistance kind) {
  const int dx = std::abs(p.x - q.x);
  const int dy = std::abs(p.y - q.y);
  const int dz = std::abs(p.z - q.z);
  if (kind == PixelDistance::D6) {
    return dx + dy + dz;
  }
  return std::max({dx, dy, dz});
}

/// The six face-neighbor offsets, ordered -x, +x, -y, +y, -z, +z.
inline constexpr std::array<std::array<int, 3>, 6> kFaceOffsets = {{
    {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1},
}};

/// All 26 offsets of the 3x3x3 neighborhood, in scan order (x fastest).
inline constexpr std::array<std::array<int, 3>, 26> kAllOffsets = [] {
  std::array<std::array<int, 3>, 26> out{};
  std::size_t k = 0;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx != 0 || dy != 0 || dz != 0) {
          out[k++] = {dx, dy, dz};
        }
      }
    }
  }
  return out;
}();

/// Dense 3D scalar grid, x-fastest. Images, masks and label maps all use it.
template <typename T>
class Volume {
 public:
  using value_type = T;

  Volume() = default;

  Volume(Extent extent, Spacing spacing = {}, T fill = T{})
      : extent_(extent), spacing_(spacing), data_(extent.voxel_count(), fill) {
    validate();
  }

  Volume(Extent extent, Spacing spacing, std::vector<T> data)
      : extent_(extent), spacing_(spacing), data_(std::move(data)) {
    validate();
    if (data_.size() != extent_.voxel_count()) {
      throw InvalidArgument("data: length " + std::to_string(data_.size()) +
                            " does not match size " + std::to_string(extent_.voxel_count()));
    }
  }

  [[nodiscard]] const Extent &extent() const { return extent_; }
  [[nodiscard]] const Spacing &spacing() const { return spacing_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::span<const T> data() const { return data_; }
  [[nodiscard]] std::span<T> data() { return data_; }
  [[nodiscard]] const std::vector<T> &values() const { return data_; }

  [[nodiscard]] std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + extent_.x * (y + extent_.y * z);
  }
  [[nodiscard]] std::size_t index(VoxelCoord c) const {
    return index(static_cast<std::size_t>(c.x), static_cast<std::size_t>(c.y),
                 static_cast<std::size_t>(c.z));
  }
  [[nodiscard]] VoxelCoord coord(std::size_t offset) const {
    const auto x = offset % extent_.x;
    const auto y = (offset / extent_.x) % extent_.y;
    const auto z = offset / (extent_.x * extent_.y);
    return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
            static_cast<std::int32_t>(z)};
  }
  [[nodiscard]] bool contains(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < static_cast<std::int64_t>(extent_.x) &&
           y < static_cast<std::int64_t>(extent_.y) && z < static_cast<std::int64_t>(extent_.z);
  }

  T &operator()(std::size_t x, std::size_t y, std::size_t z) { return data_[index(x, y, z)]; }
  const T &operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return data_[index(x, y, z)];
  }
  T &operator[](VoxelCoord c) { return data_[index(c)]; }
  const T &operator[](VoxelCoord c) const { return data_[index(c)]; }
  T &operator[](std::size_t offset) { return data_[offset]; }
  const T &operator[](std::size_t offset) const { return data_[offset]; }

  bool operator==(const Volume &) const = default;

 private:
  void validate() const {
    if (!(spacing_.x > 0.0) || !(spacing_.y > 0.0) || !(spacing_.z > 0.0)) {
      throw InvalidArgument("spacing: all components must be > 0");
    }
  }

  Extent extent_{};
  Spacing spacing_{};
  std::vector<T> data_;
};

using VolumeU8 = Volume<std::uint8_t>;
using VolumeU16 = Volume<std::uint16_t>;
using VolumeU32 = Volume<std::uint32_t>;
using VolumeF32 = Volume<float>;

/// Binary foreground mask, values in {0, 1}.
using Mask = VolumeU8;
/// Label map, 0 = background.
using LabelVolume = VolumeU32;

/// Element-wise conversion to another sample type (static_cast per voxel).
template <typename To, typename From>
[[nodiscard]] Volume<To> convert(const Volume<From> &in) {
  std::vector<To> out(in.size());
  std::transform(in.values().begin(), in.values().end(), out.begin(),
                 [](From v) { return static_cast<To>(v); });
  return Volume<To>(in.extent(), in.spacing(), std::move(out));
}

}  // namespace nucseg
