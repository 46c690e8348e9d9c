#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nucseg/volume.hpp"

namespace nucseg {

/// A maximal connected set of foreground voxels. Voxels are kept in scan
/// order (x fastest), so voxels.front() is the component's first voxel.
struct Component {
  std::uint32_t id = 0;
  std::vector<VoxelCoord> voxels;

  [[nodiscard]] std::size_t size() const { return voxels.size(); }
};

/// Connected components of the nonzero voxels, numbered 1.. in scan order of
/// their first voxel. connectivity is 6 or 26.
[[nodiscard]] std::vector<Component> connected_components(const Mask &mask, int connectivity = 6);

/// Voxels of `component` with at least one 6-neighbor outside it. Positions
/// outside `extent` count as outside.
[[nodiscard]] std::vector<VoxelCoord> component_border(const Component &component,
                                                       const Extent &extent);

/// Lookup from voxel position to the voxel's index within a voxel list,
/// backed by a dense grid over the list's bounding box.
class BoxIndex {
 public:
  explicit BoxIndex(std::span<const VoxelCoord> voxels);

  /// Index of the voxel at (x, y, z) in the list, or -1 if it is not a member.
  [[nodiscard]] std::int32_t find(std::int64_t x, std::int64_t y, std::int64_t z) const {
    x -= lo_.x;
    y -= lo_.y;
    z -= lo_.z;
    if (x < 0 || y < 0 || z < 0 || x >= dim_x_ || y >= dim_y_ || z >= dim_z_) {
      return -1;
    }
    return cells_[static_cast<std::size_t>(x + dim_x_ * (y + dim_y_ * z))];
  }

 private:
  VoxelCoord lo_{};
  std::int64_t dim_x_ = 0;
  std::int64_t dim_y_ = 0;
  std::int64_t dim_z_ = 0;
  std::vector<std::int32_t> cells_;
};

/// Splits a voxel list into connected groups. Two voxels join the same group
/// only if they are adjacent and carry the same `group_of` value. Returned
/// groups hold indices into `voxels`, each group ascending, groups ordered by
/// their smallest index.
[[nodiscard]] std::vector<std::vector<std::size_t>> connected_groups(
    std::span<const VoxelCoord> voxels, std::span<const std::uint8_t> group_of,
    int connectivity = 6);

}  // namespace nucseg
