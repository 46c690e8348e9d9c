#include "nucseg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "nucseg/error.hpp"

namespace nucseg {

WeightedGraph WeightedGraph::from_edges(std::size_t node_count, std::span<const Edge> edges,
                                        std::vector<NodeWeight> node_weights) {
  if (node_weights.empty()) {
    node_weights.assign(node_count, 1);
  }
  if (node_weights.size() != node_count) {
    throw InvalidArgument("node_weights: must have one entry per node");
  }

  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto &e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw InvalidArgument("edge: endpoint out of range");
    }
    if (e.u == e.v) {
      throw InvalidArgument("edge: self loop on node " + std::to_string(e.u));
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("edge: weight must be finite and >= 0");
    }
    directed.push_back(e);
    directed.push_back({e.v, e.u, e.weight});
  }
  std::stable_sort(directed.begin(), directed.end(), [](const Edge &a, const Edge &b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  WeightedGraph g;
  g.node_weights_ = std::move(node_weights);
  g.total_node_weight_ =
      std::accumulate(g.node_weights_.begin(), g.node_weights_.end(), NodeWeight{0});
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t i = 0; i < directed.size();) {
    std::size_t j = i;
    double w = 0.0;
    while (j < directed.size() && directed[j].u == directed[i].u && directed[j].v == directed[i].v) {
      w += directed[j].weight;
      ++j;
    }
    g.targets_.push_back(directed[i].v);
    g.weights_.push_back(w);
    ++g.offsets_[directed[i].u + 1];
    i = j;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto nbrs = neighbors(u);
    const auto ws = edge_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (u < nbrs[k]) out.push_back({u, nbrs[k], ws[k]});
    }
  }
  return out;
}

double cut_weight(const WeightedGraph &graph, std::span<const std::uint8_t> side) {
  double cut = 0.0;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    const auto nbrs = graph.neighbors(u);
    const auto ws = graph.edge_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (u < nbrs[k] && side[u] != side[nbrs[k]]) cut += ws[k];
    }
  }
  return cut;
}

void write_edge_list(std::ostream &out, const WeightedGraph &graph) {
  out << "# nodes " << graph.node_count() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto &e : graph.edges()) {
    out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  }
}

WeightedGraph read_edge_list(std::istream &in) {
  std::vector<Edge> edges;
  std::size_t nodes = 0;
  bool have_nodes = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      std::size_t n = 0;
      if (ls >> hash >> key >> n && key == "nodes") {
        nodes = n;
        have_nodes = true;
      }
      continue;
    }
    Edge e;
    if (!(ls >> e.u >> e.v >> e.weight)) {
      throw DataError("edge list line " + std::to_string(line_no) + ": expected 'u v w'");
    }
    edges.push_back(e);
  }
  if (!have_nodes) {
    for (const auto &e : edges) nodes = std::max<std::size_t>(nodes, std::max(e.u, e.v) + 1);
  }
  return WeightedGraph::from_edges(nodes, edges);
}

}  // namespace nucseg
