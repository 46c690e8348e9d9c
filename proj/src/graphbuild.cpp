#include "nucseg/graphbuild.hpp"

#include <algorithm>
#include <cmath>

#include "nucseg/error.hpp"

namespace nucseg {

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Grad:
      return "grad";
    case WeightScheme::Prob:
      return "prob";
    case WeightScheme::Const:
      return "const";
  }
  return "?";
}

WeightScheme parse_weight_scheme(const std::string &name) {
  if (name == "grad") return WeightScheme::Grad;
  if (name == "prob") return WeightScheme::Prob;
  if (name == "const") return WeightScheme::Const;
  throw InvalidArgument("weights.scheme: unknown value '" + name + "'");
}

void EdgeWeightConfig::validate() const {
  if (!(sigma_grad > 0.0)) {
    throw InvalidArgument("weights.sigma_grad: must be > 0");
  }
}

ComponentGraph build_graph(const Component &component, const VolumeF32 &intensity,
                           const EdgeWeightConfig &config, const PosteriorLookup &posterior) {
  config.validate();
  if (component.voxels.empty()) {
    throw InvalidArgument("component: must not be empty");
  }
  if (config.scheme == WeightScheme::Prob && !posterior) {
    throw InvalidArgument("weights.scheme: prob requires a fitted histogram model");
  }

  ComponentGraph out;
  out.node_coords = component.voxels;
  const auto &nodes = out.node_coords;
  const BoxIndex index(nodes);
  const auto &spacing = intensity.spacing();

  std::vector<float> value(nodes.size());
  std::vector<double> p_background;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    value[i] = intensity[nodes[i]];
  }
  if (config.scheme == WeightScheme::Prob) {
    p_background.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      p_background[i] = std::clamp(posterior(nodes[i], value[i]), kPosteriorFloor, 1.0);
    }
  }

  const double two_sigma_sq = 2.0 * config.sigma_grad * config.sigma_grad;
  std::vector<Edge> edges;
  edges.reserve(nodes.size() * 3);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto &p = nodes[i];
    // forward neighbors only: +x, +y, +z
    for (int axis = 0; axis < 3; ++axis) {
      const auto &o = kFaceOffsets[2 * axis + 1];
      const auto j = index.find(p.x + o[0], p.y + o[1], p.z + o[2]);
      if (j < 0) continue;
      double w = 1.0;
      switch (config.scheme) {
        case WeightScheme::Grad: {
          const double d = static_cast<double>(value[i]) - value[static_cast<std::size_t>(j)];
          w = std::exp(-d * d / two_sigma_sq);
          break;
        }
        case WeightScheme::Prob:
          w = -std::log(std::min(p_background[i], p_background[static_cast<std::size_t>(j)]));
          break;
        case WeightScheme::Const:
          break;
      }
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w / spacing[axis]});
    }
  }
  out.graph = WeightedGraph::from_edges(nodes.size(), edges);
  return out;
}

ComponentGraph build_graph(const Component &component, const VolumeF32 &intensity,
                           const HistogramModel &model, const EdgeWeightConfig &config) {
  model.validate();
  return build_graph(component, intensity, config, [&model](const VoxelCoord &, float level) {
    return background_posterior(model, level);
  });
}

}  // namespace nucseg
