#pragma once

#include <functional>
#include <string>

#include "nucseg/components.hpp"
#include "nucseg/graph.hpp"
#include "nucseg/histmodel.hpp"
#include "nucseg/volume.hpp"

namespace nucseg {

enum class WeightScheme { Grad, Prob, Const };

[[nodiscard]] std::string to_string(WeightScheme scheme);
[[nodiscard]] WeightScheme parse_weight_scheme(const std::string &name);

struct EdgeWeightConfig {
  WeightScheme scheme = WeightScheme::Grad;
  double sigma_grad = 15.0;

  void validate() const;
};

/// Grid graph of one component: node i is voxel node_coords[i] (scan order),
/// edges join 6-adjacent voxels of the component.
struct ComponentGraph {
  std::vector<VoxelCoord> node_coords;
  WeightedGraph graph;
};

/// P(B | I(u)) for a voxel and its gray level.
using PosteriorLookup = std::function<double(const VoxelCoord &, float)>;

/// Edge weights, before division by the physical edge length:
///   grad:  exp(-(I_u - I_v)^2 / (2 sigma_grad^2))
///   prob:  -log min(P(B|I_u), P(B|I_v))
///   const: 1
/// `posterior` is required for the prob scheme and ignored otherwise.
[[nodiscard]] ComponentGraph build_graph(const Component &component, const VolumeF32 &intensity,
                                         const EdgeWeightConfig &config,
                                         const PosteriorLookup &posterior = {});

/// Prob-scheme convenience: one histogram model for the whole volume.
[[nodiscard]] ComponentGraph build_graph(const Component &component, const VolumeF32 &intensity,
                                         const HistogramModel &model,
                                         const EdgeWeightConfig &config);

}  // namespace nucseg
