#include "nucseg/components.hpp"

#include <limits>
#include <algorithm>

namespace nucseg {

namespace {

std::span<const std::array<int, 3>> offsets_for(int connectivity) {
  if (connectivity == 6) {
    return kFaceOffsets;
  }
  if (connectivity == 26) {
    return kAllOffsets;
  }
  throw InvalidArgument("connectivity: must be 6 or 26");
}

}  // namespace

std::vector<Component> connected_components(const Mask &mask, int connectivity) {
  const auto offsets = offsets_for(connectivity);
  std::vector<std::uint32_t> label(mask.size(), 0);
  std::vector<Component> out;
  std::vector<std::size_t> queue;

  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (mask[start] == 0 || label[start] != 0) {
      continue;
    }
    Component comp;
    comp.id = static_cast<std::uint32_t>(out.size() + 1);
    queue.clear();
    queue.push_back(start);
    label[start] = comp.id;
    std::vector<std::size_t> members;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto cur = queue[head];
      members.push_back(cur);
      const auto c = mask.coord(cur);
      for (const auto &o : offsets) {
        const std::int64_t nx = c.x + o[0], ny = c.y + o[1], nz = c.z + o[2];
        if (!mask.contains(nx, ny, nz)) continue;
        const auto n = mask.index(nx, ny, nz);
        if (mask[n] != 0 && label[n] == 0) {
          label[n] = comp.id;
          queue.push_back(n);
        }
      }
    }
    std::sort(members.begin(), members.end());
    comp.voxels.reserve(members.size());
    for (auto m : members) {
      comp.voxels.push_back(mask.coord(m));
    }
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<VoxelCoord> component_border(const Component &component, const Extent &extent) {
  const BoxIndex index(component.voxels);
  std::vector<VoxelCoord> border;
  for (const auto &v : component.voxels) {
    for (const auto &o : kFaceOffsets) {
      const std::int64_t nx = v.x + o[0], ny = v.y + o[1], nz = v.z + o[2];
      const bool inside_volume = nx >= 0 && ny >= 0 && nz >= 0 &&
                                 nx < static_cast<std::int64_t>(extent.x) &&
                                 ny < static_cast<std::int64_t>(extent.y) &&
                                 nz < static_cast<std::int64_t>(extent.z);
      if (!inside_volume || index.find(nx, ny, nz) < 0) {
        border.push_back(v);
        break;
      }
    }
  }
  return border;
}

BoxIndex::BoxIndex(std::span<const VoxelCoord> voxels) {
  if (voxels.empty()) {
    return;
  }
  if (voxels.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw InvalidArgument("component: too many voxels");
  }
  VoxelCoord hi = voxels.front();
  lo_ = voxels.front();
  for (const auto &v : voxels) {
    lo_.x = std::min(lo_.x, v.x);
    lo_.y = std::min(lo_.y, v.y);
    lo_.z = std::min(lo_.z, v.z);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
    hi.z = std::max(hi.z, v.z);
  }
  dim_x_ = hi.x - lo_.x + 1;
  dim_y_ = hi.y - lo_.y + 1;
  dim_z_ = hi.z - lo_.z + 1;
  cells_.assign(static_cast<std::size_t>(dim_x_ * dim_y_ * dim_z_), -1);
  for (std::size_t i = 0; i < voxels.size(); ++i) {
    const auto &v = voxels[i];
    cells_[static_cast<std::size_t>((v.x - lo_.x) + dim_x_ * ((v.y - lo_.y) + dim_y_ * (v.z - lo_.z)))] =
        static_cast<std::int32_t>(i);
  }
}

std::vector<std::vector<std::size_t>> connected_groups(std::span<const VoxelCoord> voxels,
                                                       std::span<const std::uint8_t> group_of,
                                                       int connectivity) {
  if (group_of.size() != voxels.size()) {
    throw InvalidArgument("group_of: must have one entry per voxel");
  }
  const auto offsets = offsets_for(connectivity);
  const BoxIndex index(voxels);
  std::vector<bool> seen(voxels.size(), false);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> queue;

  for (std::size_t start = 0; start < voxels.size(); ++start) {
    if (seen[start]) continue;
    seen[start] = true;
    queue.assign(1, start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto &v = voxels[queue[head]];
      for (const auto &o : offsets) {
        const auto n = index.find(v.x + o[0], v.y + o[1], v.z + o[2]);
        if (n < 0) continue;
        const auto ni = static_cast<std::size_t>(n);
        if (!seen[ni] && group_of[ni] == group_of[start]) {
          seen[ni] = true;
          queue.push_back(ni);
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    groups.push_back(queue);
  }
  return groups;
}

}  // namespace nucseg
