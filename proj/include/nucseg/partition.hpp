#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nucseg/components.hpp"
#include "nucseg/graph.hpp"

namespace nucseg {

struct PartitionerConfig {
  double epsilon = 0.5;             ///< imbalance factor
  std::uint64_t seed = 0;
  std::size_t coarsen_floor = 40;   ///< stop coarsening at this many nodes
  int fm_passes = 10;               ///< max FM passes per level
  int initial_attempts = 8;         ///< BFS-grown starts tried on the coarsest graph
  std::size_t fm_stall_moves = 250; ///< end a pass after this many moves without a new best

  void validate() const;
};

struct Bipartition {
  std::vector<std::uint8_t> side;  ///< block of every node, 0 or 1
  double cut_weight = 0.0;
  std::array<NodeWeight, 2> block_weights{0, 0};
};

struct FmPassRecord {
  std::size_t level = 0;  ///< 0 = input graph, higher = coarser
  double cut_before = 0.0;
  double cut_after = 0.0;
};

struct PartitionStats {
  std::size_t levels = 0;  ///< graphs in the hierarchy, including the input
  std::vector<FmPassRecord> fm_passes;
};

/// Largest admissible block weight (1 + eps) * ceil(total / 2), rounded down.
[[nodiscard]] NodeWeight max_block_weight(NodeWeight total, double epsilon);

/// Both blocks non-empty and neither heavier than max_block_weight.
[[nodiscard]] bool is_balanced(const WeightedGraph &graph, std::span<const std::uint8_t> side,
                               double epsilon);

/// Balanced two-way partition minimizing the cut weight. Multilevel scheme:
/// seeded heavy-edge matching, BFS growing on the coarsest graph, FM
/// refinement on every level. Deterministic for a fixed seed. Throws
/// InvalidArgument for graphs with fewer than two nodes.
[[nodiscard]] Bipartition bipartition(const WeightedGraph &graph, const PartitionerConfig &config,
                                      PartitionStats *stats = nullptr);

/// FM refinement in place. `side` must already satisfy the balance bound and
/// it keeps doing so. Returns the final cut weight.
double fm_refine(const WeightedGraph &graph, std::vector<std::uint8_t> &side, NodeWeight max_block,
                 const PartitionerConfig &config, std::size_t level = 0,
                 PartitionStats *stats = nullptr);

/// Each block of the bipartition broken into its 6-connected pieces.
/// Node i of the partitioned graph must be component.voxels[i].
[[nodiscard]] std::vector<Component> split_blocks(const Component &component,
                                                  const Bipartition &partition);

}  // namespace nucseg
