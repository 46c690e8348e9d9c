#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nucseg {

using NodeId = std::uint32_t;
using NodeWeight = std::int64_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

/// Undirected graph with non-negative edge weights and integer node weights,
/// stored as CSR with both directions of every edge.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Parallel edges are merged by summing their weights. Self loops and
  /// negative weights are rejected. Empty node_weights means all ones.
  static WeightedGraph from_edges(std::size_t node_count, std::span<const Edge> edges,
                                  std::vector<NodeWeight> node_weights = {});

  [[nodiscard]] std::size_t node_count() const { return node_weights_.size(); }
  /// Number of undirected edges.
  [[nodiscard]] std::size_t edge_count() const { return targets_.size() / 2; }
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  [[nodiscard]] std::span<const double> edge_weights(NodeId u) const {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  [[nodiscard]] NodeWeight node_weight(NodeId u) const { return node_weights_[u]; }
  [[nodiscard]] NodeWeight total_node_weight() const { return total_node_weight_; }
  [[nodiscard]] const std::vector<NodeWeight> &node_weights() const { return node_weights_; }

  /// Every undirected edge once, with u < v, in CSR order.
  [[nodiscard]] std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<NodeWeight> node_weights_;
  NodeWeight total_node_weight_ = 0;
};

/// Sum of weights of edges whose endpoints lie on different sides.
[[nodiscard]] double cut_weight(const WeightedGraph &graph, std::span<const std::uint8_t> side);

/// Plain-text edge list, one "u v w" line per undirected edge, preceded by a
/// "# nodes N" line.
void write_edge_list(std::ostream &out, const WeightedGraph &graph);

/// Reads the format written by write_edge_list. Lines starting with '#' other
/// than "# nodes N" are comments. Without a node line, N = max id + 1.
[[nodiscard]] WeightedGraph read_edge_list(std::istream &in);

}  // namespace nucseg
