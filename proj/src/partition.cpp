#include "nucseg/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "nucseg/error.hpp"

namespace nucseg {

void PartitionerConfig::validate() const {
  if (!(epsilon > 0.0)) {
    throw InvalidArgument("partition.epsilon: must be > 0");
  }
  if (coarsen_floor < 2) {
    throw InvalidArgument("partition.coarsen_floor: must be >= 2");
  }
  if (fm_passes < 0) {
    throw InvalidArgument("partition.fm_passes: must be >= 0");
  }
  if (initial_attempts < 1) {
    throw InvalidArgument("partition.initial_attempts: must be >= 1");
  }
}

NodeWeight max_block_weight(NodeWeight total, double epsilon) {
  const NodeWeight half = (total + 1) / 2;
  return static_cast<NodeWeight>(std::floor((1.0 + epsilon) * static_cast<double>(half) + 1e-9));
}

bool is_balanced(const WeightedGraph &graph, std::span<const std::uint8_t> side, double epsilon) {
  std::array<NodeWeight, 2> w{0, 0};
  for (NodeId u = 0; u < graph.node_count(); ++u) w[side[u]] += graph.node_weight(u);
  const auto limit = max_block_weight(graph.total_node_weight(), epsilon);
  return w[0] > 0 && w[1] > 0 && w[0] <= limit && w[1] <= limit;
}

namespace {

std::array<NodeWeight, 2> block_weights(const WeightedGraph &g, std::span<const std::uint8_t> side) {
  std::array<NodeWeight, 2> w{0, 0};
  for (NodeId u = 0; u < g.node_count(); ++u) w[side[u]] += g.node_weight(u);
  return w;
}

struct Level {
  WeightedGraph graph;
  std::vector<NodeId> fine_to_coarse;  // maps nodes of the finer graph onto this one
};

// One round of heavy-edge matching and contraction. Returns false when the
// matching is too small to be worth another level.
bool coarsen_once(const WeightedGraph &fine, NodeWeight max_cluster, std::mt19937_64 &rng,
                  Level &out) {
  const auto n = fine.node_count();
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  std::shuffle(order.begin(), order.end(), rng);

  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> mate(n, kNone);
  for (const NodeId u : order) {
    if (mate[u] != kNone) continue;
    NodeId best = kNone;
    double best_w = -1.0;
    const auto nbrs = fine.neighbors(u);
    const auto ws = fine.edge_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId v = nbrs[k];
      if (mate[v] != kNone || fine.node_weight(u) + fine.node_weight(v) > max_cluster) continue;
      if (ws[k] > best_w || (ws[k] == best_w && v < best)) {
        best_w = ws[k];
        best = v;
      }
    }
    if (best != kNone) {
      mate[u] = best;
      mate[best] = u;
    } else {
      mate[u] = u;
    }
  }

  out.fine_to_coarse.assign(n, 0);
  NodeId next = 0;
  std::vector<NodeWeight> weights;
  for (NodeId u = 0; u < n; ++u) {
    if (mate[u] == u || u < mate[u]) {
      out.fine_to_coarse[u] = next;
      NodeWeight w = fine.node_weight(u);
      if (mate[u] != u) {
        out.fine_to_coarse[mate[u]] = next;
        w += fine.node_weight(mate[u]);
      }
      weights.push_back(w);
      ++next;
    }
  }
  if (static_cast<double>(next) > 0.95 * static_cast<double>(n)) {
    return false;
  }

  std::vector<Edge> edges;
  edges.reserve(fine.edge_count());
  for (NodeId u = 0; u < n; ++u) {
    const auto nbrs = fine.neighbors(u);
    const auto ws = fine.edge_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId v = nbrs[k];
      if (u >= v) continue;
      const NodeId cu = out.fine_to_coarse[u], cv = out.fine_to_coarse[v];
      if (cu != cv) edges.push_back({cu, cv, ws[k]});
    }
  }
  out.graph = WeightedGraph::from_edges(next, edges, std::move(weights));
  return true;
}

// BFS from `start`; returns the last node dequeued at maximal depth (lowest id among ties).
NodeId farthest_node(const WeightedGraph &g, NodeId start) {
  std::vector<std::int64_t> depth(g.node_count(), -1);
  std::queue<NodeId> q;
  depth[start] = 0;
  q.push(start);
  NodeId far = start;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    if (depth[u] > depth[far] || (depth[u] == depth[far] && u < far)) far = u;
    for (const NodeId v : g.neighbors(u)) {
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        q.push(v);
      }
    }
  }
  return far;
}

NodeId pseudo_peripheral_node(const WeightedGraph &g) {
  return farthest_node(g, farthest_node(g, 0));
}

// Grows block 1 breadth-first from `start` until it holds half of the total
// node weight. Unreached parts of a disconnected graph are entered at their
// lowest-id node.
std::vector<std::uint8_t> grow_from(const WeightedGraph &g, NodeId start, NodeWeight max_block) {
  const auto n = g.node_count();
  const NodeWeight total = g.total_node_weight();
  const NodeWeight target = (total + 1) / 2;
  std::vector<std::uint8_t> side(n, 0);
  std::vector<bool> queued(n, false);
  std::queue<NodeId> q;
  q.push(start);
  queued[start] = true;
  NodeWeight grown = 0;
  NodeId scan = 0;
  while (grown < target) {
    if (q.empty()) {
      while (scan < n && queued[scan]) ++scan;
      if (scan == n) break;
      queued[scan] = true;
      q.push(scan);
    }
    const NodeId u = q.front();
    q.pop();
    const NodeWeight w = g.node_weight(u);
    if (grown + w > max_block || total - grown - w < 1) continue;
    side[u] = 1;
    grown += w;
    for (const NodeId v : g.neighbors(u)) {
      if (!queued[v]) {
        queued[v] = true;
        q.push(v);
      }
    }
  }
  return side;
}

struct HeapEntry {
  double gain;
  NodeId node;
  std::uint32_t version;
};

struct HeapOrder {
  // max gain first, then lowest node id
  bool operator()(const HeapEntry &a, const HeapEntry &b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

// Moves nodes from an overweight block until both blocks respect the bound.
// Chooses the move losing the least cut each time.
void rebalance(const WeightedGraph &g, std::vector<std::uint8_t> &side, NodeWeight max_block) {
  auto w = block_weights(g, side);
  while (w[0] > max_block || w[1] > max_block || w[0] == 0 || w[1] == 0) {
    const std::uint8_t from = (w[0] > max_block || w[1] == 0) ? 0 : 1;
    NodeId best = std::numeric_limits<NodeId>::max();
    double best_gain = -std::numeric_limits<double>::infinity();
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (side[u] != from) continue;
      if (w[1 - from] + g.node_weight(u) > max_block && w[1 - from] != 0) continue;
      double gain = 0.0;
      const auto nbrs = g.neighbors(u);
      const auto ws = g.edge_weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) gain += side[nbrs[k]] != from ? ws[k] : -ws[k];
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    if (best == std::numeric_limits<NodeId>::max()) {
      throw DataError("partition: cannot satisfy the balance constraint");
    }
    side[best] = static_cast<std::uint8_t>(1 - from);
    w[from] -= g.node_weight(best);
    w[1 - from] += g.node_weight(best);
  }
}

}  // namespace

double fm_refine(const WeightedGraph &g, std::vector<std::uint8_t> &side, NodeWeight max_block,
                 const PartitionerConfig &config, std::size_t level, PartitionStats *stats) {
  const auto n = g.node_count();
  double cut = cut_weight(g, side);
  std::vector<double> gain(n);
  std::vector<std::uint32_t> version(n, 0);
  std::vector<bool> locked(n);
  std::vector<NodeId> moves;

  for (int pass = 0; pass < config.fm_passes; ++pass) {
    auto w = block_weights(g, side);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
    std::fill(locked.begin(), locked.end(), false);
    for (NodeId u = 0; u < n; ++u) {
      double ext = 0.0, in = 0.0;
      bool boundary = false;
      const auto nbrs = g.neighbors(u);
      const auto ws = g.edge_weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (side[nbrs[k]] != side[u]) {
          ext += ws[k];
          boundary = true;
        } else {
          in += ws[k];
        }
      }
      gain[u] = ext - in;
      ++version[u];
      if (boundary) heap.push({gain[u], u, version[u]});
    }

    const double cut_before = cut;
    double current = cut;
    double best = cut;
    NodeWeight best_imbalance = std::abs(w[0] - w[1]);
    std::size_t best_prefix = 0;
    moves.clear();

    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      heap.pop();
      const NodeId u = top.node;
      if (locked[u] || top.version != version[u]) continue;
      const std::uint8_t from = side[u];
      const std::uint8_t to = 1 - from;
      const NodeWeight wu = g.node_weight(u);
      if (w[to] + wu > max_block || w[from] - wu < 1) {
        continue;
      }
      side[u] = to;
      w[from] -= wu;
      w[to] += wu;
      current -= gain[u];
      locked[u] = true;
      moves.push_back(u);

      const auto nbrs = g.neighbors(u);
      const auto ws = g.edge_weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const NodeId v = nbrs[k];
        if (locked[v]) continue;
        gain[v] += side[v] == to ? -2.0 * ws[k] : 2.0 * ws[k];
        ++version[v];
        heap.push({gain[v], v, version[v]});
      }

      const NodeWeight imbalance = std::abs(w[0] - w[1]);
      const double tol = 1e-12 * std::max(1.0, std::abs(best));
      if (current < best - tol || (current <= best + tol && imbalance < best_imbalance)) {
        best = std::min(best, current);
        best_imbalance = imbalance;
        best_prefix = moves.size();
      } else if (moves.size() - best_prefix > config.fm_stall_moves) {
        break;
      }
    }

    for (std::size_t i = moves.size(); i > best_prefix; --i) {
      const NodeId u = moves[i - 1];
      side[u] = 1 - side[u];
    }
    cut = cut_weight(g, side);
    if (stats) stats->fm_passes.push_back({level, cut_before, cut});
    if (!(cut < cut_before - 1e-12 * std::max(1.0, cut_before))) {
      break;
    }
  }
  return cut;
}

Bipartition bipartition(const WeightedGraph &graph, const PartitionerConfig &config,
                        PartitionStats *stats) {
  config.validate();
  if (graph.node_count() < 2) {
    throw InvalidArgument("partition: graph needs at least two nodes");
  }
  std::mt19937_64 rng(config.seed);
  const NodeWeight total = graph.total_node_weight();
  const NodeWeight max_block = max_block_weight(total, config.epsilon);

  // Coarsening. levels[0] is the input graph (fine_to_coarse unused).
  const auto max_cluster = std::max<NodeWeight>(
      1, std::min<NodeWeight>(
             static_cast<NodeWeight>(std::ceil(1.5 * static_cast<double>(total) /
                                               static_cast<double>(config.coarsen_floor))),
             std::max<NodeWeight>(1, max_block - (total + 1) / 2)));
  std::vector<Level> levels;
  levels.push_back({graph, {}});
  while (levels.back().graph.node_count() > config.coarsen_floor) {
    Level next;
    if (!coarsen_once(levels.back().graph, max_cluster, rng, next)) break;
    levels.push_back(std::move(next));
  }
  if (stats) stats->levels = levels.size();

  // Initial partition: BFS growing from the pseudo-peripheral node and from
  // random nodes, each refined; the lowest cut wins.
  const auto &coarsest = levels.back().graph;
  const std::size_t top = levels.size() - 1;
  std::vector<std::uint8_t> best_side;
  double best_cut = std::numeric_limits<double>::infinity();
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(coarsest.node_count() - 1));
  for (int attempt = 0; attempt < config.initial_attempts; ++attempt) {
    const NodeId start = attempt == 0 ? pseudo_peripheral_node(coarsest) : pick(rng);
    auto side = grow_from(coarsest, start, max_block);
    rebalance(coarsest, side, max_block);
    const double cut = fm_refine(coarsest, side, max_block, config, top, stats);
    if (cut < best_cut) {
      best_cut = cut;
      best_side = std::move(side);
    }
  }

  // Uncoarsening with refinement on every finer level.
  for (std::size_t l = top; l > 0; --l) {
    const auto &map = levels[l].fine_to_coarse;
    const auto &fine = levels[l - 1].graph;
    std::vector<std::uint8_t> side(fine.node_count());
    for (NodeId u = 0; u < fine.node_count(); ++u) side[u] = best_side[map[u]];
    best_cut = fm_refine(fine, side, max_block, config, l - 1, stats);
    best_side = std::move(side);
  }

  if (!is_balanced(graph, best_side, config.epsilon)) {
    rebalance(graph, best_side, max_block);
  }

  Bipartition out;
  out.side = std::move(best_side);
  out.cut_weight = cut_weight(graph, out.side);
  out.block_weights = block_weights(graph, out.side);
  return out;
}

std::vector<Component> split_blocks(const Component &component, const Bipartition &partition) {
  if (partition.side.size() != component.voxels.size()) {
    throw InvalidArgument("partition: does not cover the component");
  }
  const auto groups = connected_groups(component.voxels, partition.side, 6);
  std::vector<Component> out;
  out.reserve(groups.size());
  for (const auto &group : groups) {
    Component c;
    c.id = static_cast<std::uint32_t>(out.size() + 1);
    c.voxels.reserve(group.size());
    for (const auto i : group) c.voxels.push_back(component.voxels[i]);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace nucseg
