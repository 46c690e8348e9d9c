#pragma once

#include <vector>

#include <json.hpp>

#include "nucseg/binarize.hpp"
#include "nucseg/graphbuild.hpp"
#include "nucseg/nucmodel.hpp"
#include "nucseg/partition.hpp"

namespace nucseg {

/// Which gray levels feed the edge weights.
enum class WeightSource { Smoothed, Raw };

struct PipelineConfig {
  BinarizationConfig binarization;
  EdgeWeightConfig weights;
  WeightSource weight_source = WeightSource::Smoothed;
  PartitionerConfig partition;
  NucleusModelParams model;  ///< model.epsilon follows partition.epsilon
  int threads = 1;           ///< 0 = hardware concurrency

  void validate(std::size_t depth) const;
};

/// Everything the recursion needs besides the component itself.
struct SplitContext {
  const VolumeF32 &intensity;
  PosteriorLookup posterior;  ///< required for the prob scheme
  EdgeWeightConfig weights;
  PartitionerConfig partition;
  ScoringContext scoring;
};

struct ScoredComponent {
  Component component;
  double score = 0.0;
  double volume = 0.0;
  double sphericity = 0.0;
};

/// Depth-first splitting of one foreground component. The component is scored
/// against a parent score of 0; repartition decisions bipartition it, break
/// the blocks into connected pieces and score each piece against the
/// component's own score. When no descendant survives, a repartitioned
/// component is kept iff its score is positive. Returns the kept leaves.
[[nodiscard]] std::vector<ScoredComponent> recursive_split(const Component &component,
                                                           const SplitContext &context);

struct ObjectRecord {
  std::uint32_t id = 0;
  std::size_t voxel_count = 0;
  double volume = 0.0;
  double sphericity = 0.0;
  double score = 0.0;
};

void to_json(nlohmann::json &j, const ObjectRecord &record);

struct SegmentationResult {
  LabelVolume labels;
  std::vector<ObjectRecord> objects;
  std::vector<SlabReport> slabs;
  std::size_t foreground_components = 0;
};

/// Binarize, take 6-connected components, split each, and paint the kept
/// objects with ids ordered by their first voxel in scan order.
[[nodiscard]] SegmentationResult segment(const VolumeF32 &volume, const PipelineConfig &config);

/// Segmentation of a precomputed binarization (used by segment()).
[[nodiscard]] SegmentationResult segment(const VolumeF32 &volume, const Binarization &binarized,
                                         const PipelineConfig &config);

}  // namespace nucseg
