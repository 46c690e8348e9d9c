#include "nucseg/splitter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "nucseg/error.hpp"

namespace nucseg {

void PipelineConfig::validate(std::size_t depth) const {
  binarization.validate(depth);
  weights.validate();
  partition.validate();
  model.validate();
  if (threads < 0) {
    throw InvalidArgument("threads: must be >= 0");
  }
}

void to_json(nlohmann::json &j, const ObjectRecord &r) {
  j = nlohmann::json{{"id", r.id},
                     {"voxel_count", r.voxel_count},
                     {"volume", r.volume},
                     {"sphericity", r.sphericity},
                     {"score", r.score}};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Partitioner seed for one call: a function of the configured seed and the
// component, so results do not depend on evaluation order.
std::uint64_t component_seed(std::uint64_t seed, const Component &c) {
  const auto &f = c.voxels.front();
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(f.x));
  h = splitmix64(h ^ static_cast<std::uint64_t>(f.y));
  h = splitmix64(h ^ static_cast<std::uint64_t>(f.z));
  return splitmix64(h ^ c.voxels.size());
}

std::vector<ScoredComponent> evaluate(const Component &component, double parent_score,
                                      const SplitContext &ctx);

// The partitioning step: bipartition, break blocks into pieces, evaluate
// every piece against the parent's score.
std::vector<ScoredComponent> split_children(const Component &component, double score,
                                            const SplitContext &ctx) {
  if (component.size() < 2) {
    return {};
  }
  const auto graph = build_graph(component, ctx.intensity, ctx.weights, ctx.posterior);
  auto pcfg = ctx.partition;
  pcfg.seed = component_seed(ctx.partition.seed, component);
  const auto partition = bipartition(graph.graph, pcfg);
  auto children = split_blocks(component, partition);
  if (children.size() < 2) {
    return {};
  }
  std::vector<ScoredComponent> kept;
  for (const auto &child : children) {
    auto sub = evaluate(child, score, ctx);
    std::move(sub.begin(), sub.end(), std::back_inserter(kept));
  }
  return kept;
}

std::vector<ScoredComponent> evaluate(const Component &component, double parent_score,
                                      const SplitContext &ctx) {
  const auto d = score_function(component, parent_score, ctx.scoring);
  switch (d.decision) {
    case Decision::Discard:
      return {};
    case Decision::Keep:
      return {{component, d.score, d.volume, d.sphericity}};
    case Decision::Repartition: {
      auto kept = split_children(component, d.score, ctx);
      if (kept.empty() && d.score > 0.0) {
        kept.push_back({component, d.score, d.volume, d.sphericity});
      }
      return kept;
    }
  }
  return {};
}

// P(B|level) tables, one per slab, indexed by the quantized gray level.
struct PosteriorTables {
  std::vector<std::size_t> slab_of_z;
  std::vector<std::vector<double>> table;

  double lookup(const VoxelCoord &c, float value) const {
    const auto &t = table[slab_of_z[static_cast<std::size_t>(c.z)]];
    const auto level = static_cast<std::size_t>(std::clamp<double>(
        std::round(value), 0.0, static_cast<double>(t.size() - 1)));
    return t[level];
  }
};

PosteriorTables posterior_tables(const Binarization &b, const VolumeF32 &source) {
  PosteriorTables out;
  float top = 0.0f;
  for (float v : source.data()) top = std::max(top, v);
  const auto levels = static_cast<std::size_t>(std::max(0.0f, std::round(top))) + 1;
  out.slab_of_z.resize(source.extent().z);
  for (std::size_t s = 0; s < b.slabs.size(); ++s) {
    const auto &slab = b.slabs[s];
    if (!slab.model) {
      throw InvalidArgument("weights.scheme: prob needs a fitted model for every slab");
    }
    for (std::size_t z = slab.z_begin; z < slab.z_end; ++z) out.slab_of_z[z] = s;
    std::vector<double> t(levels);
    for (std::size_t i = 0; i < levels; ++i) {
      t[i] = background_posterior(*slab.model, static_cast<double>(i));
    }
    out.table.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<ScoredComponent> recursive_split(const Component &component,
                                             const SplitContext &context) {
  if (component.voxels.empty()) {
    throw InvalidArgument("component: must not be empty");
  }
  return evaluate(component, 0.0, context);
}

SegmentationResult segment(const VolumeF32 &volume, const PipelineConfig &config) {
  if (volume.empty()) {
    throw DataError("segment: empty volume");
  }
  auto cfg = config;
  cfg.model.epsilon = cfg.partition.epsilon;
  cfg.validate(volume.extent().z);
  if (cfg.weights.scheme == WeightScheme::Prob) {
    cfg.binarization.fit_model = true;
  }
  const auto binarized = binarize(volume, cfg.binarization);
  return segment(volume, binarized, cfg);
}

SegmentationResult segment(const VolumeF32 &volume, const Binarization &binarized,
                           const PipelineConfig &config) {
  auto cfg = config;
  cfg.model.epsilon = cfg.partition.epsilon;
  cfg.validate(volume.extent().z);

  const VolumeF32 &source =
      cfg.weight_source == WeightSource::Smoothed ? binarized.smoothed : volume;
  PosteriorTables tables;
  PosteriorLookup posterior;
  if (cfg.weights.scheme == WeightScheme::Prob) {
    tables = posterior_tables(binarized, source);
    posterior = [&tables](const VoxelCoord &c, float v) { return tables.lookup(c, v); };
  }

  const SplitContext ctx{source, posterior, cfg.weights, cfg.partition,
                         ScoringContext{cfg.model, cut_metric_weights(volume.spacing()),
                                        volume.extent()}};

  const auto components = connected_components(binarized.mask, 6);
  std::vector<std::vector<ScoredComponent>> per_component(components.size());

  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : static_cast<std::size_t>(cfg.threads);
  threads = std::min(threads, std::max<std::size_t>(1, components.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < components.size(); i = next++) {
      try {
        per_component[i] = recursive_split(components[i], ctx);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ScoredComponent> kept;
  for (auto &list : per_component) {
    std::move(list.begin(), list.end(), std::back_inserter(kept));
  }
  std::sort(kept.begin(), kept.end(), [&](const ScoredComponent &a, const ScoredComponent &b) {
    return volume.index(a.component.voxels.front()) < volume.index(b.component.voxels.front());
  });

  SegmentationResult result;
  result.labels = LabelVolume(volume.extent(), volume.spacing(), 0u);
  result.slabs = binarized.slabs;
  result.foreground_components = components.size();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto id = static_cast<std::uint32_t>(i + 1);
    const auto &k = kept[i];
    for (const auto &v : k.component.voxels) result.labels[v] = id;
    result.objects.push_back({id, k.component.size(), k.volume, k.sphericity, k.score});
  }
  return result;
}

}  // namespace nucseg
