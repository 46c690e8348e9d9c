#include "nucseg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nucseg/config.hpp"
#include "nucseg/error.hpp"
#include "nucseg/evaluate.hpp"
#include "nucseg/rvol.hpp"
#include "nucseg/splitter.hpp"
#include "nucseg/synthgen.hpp"

namespace nucseg {

namespace {

using nlohmann::json;

// Flags that override individual fields of the JSON pipeline config.
struct Overrides {
  std::optional<std::string> method;
  std::optional<double> sigma_s;
  std::optional<int> slabs;
  std::optional<std::string> scheme;
  std::optional<double> sigma_grad;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<double> v_min;
  std::optional<double> v_max;
  std::optional<int> threads;

  void add_binarization(CLI::App &app) {
    app.add_option("--method", method, "threshold method: otsu | model_threshold");
    app.add_option("--sigma-s", sigma_s, "Gaussian prefilter sigma (voxels)");
    app.add_option("--m", slabs, "number of slabs");
  }

  void add_all(CLI::App &app) {
    add_binarization(app);
    app.add_option("--scheme", scheme, "edge weights: grad | prob | const");
    app.add_option("--sigma-grad", sigma_grad, "gradient weight scale");
    app.add_option("--epsilon", epsilon, "partition imbalance factor");
    app.add_option("--seed", seed, "partitioner seed");
    app.add_option("--v-min", v_min, "nucleus model V_min");
    app.add_option("--v-max", v_max, "nucleus model V_max");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  [[nodiscard]] PipelineConfig apply(PipelineConfig c) const {
    if (method) c.binarization.method = parse_threshold_method(*method);
    if (sigma_s) c.binarization.sigma_s = *sigma_s;
    if (slabs) c.binarization.slabs = *slabs;
    if (scheme) c.weights.scheme = parse_weight_scheme(*scheme);
    if (sigma_grad) c.weights.sigma_grad = *sigma_grad;
    if (epsilon) c.partition.epsilon = *epsilon;
    if (seed) c.partition.seed = *seed;
    if (v_min) c.model.v_min = *v_min;
    if (v_max) c.model.v_max = *v_max;
    if (threads) c.threads = *threads;
    c.model.epsilon = c.partition.epsilon;
    return c;
  }
};

PipelineConfig load_pipeline(const std::string &path, const Overrides &overrides) {
  PipelineConfig c;
  if (!path.empty()) c = pipeline_config_from_json(read_json_file(path));
  return overrides.apply(c);
}

std::ofstream open_out(const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open for writing");
  return f;
}

void write_text(const std::string &path, const std::string &text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw DataError(path + ": write failed");
}

int cmd_synth(const std::string &config_path, const std::string &prefix,
              std::optional<std::uint64_t> seed, std::ostream &out) {
  auto cfg = scene_config_from_json(read_json_file(config_path));
  if (seed) cfg.seed = *seed;
  const auto scene = generate(cfg);
  write_rvol(prefix + "_intensity", scene.intensity);
  write_rvol(prefix + "_truth", scene.truth);
  out << "synth: " << scene.nuclei.size() << " nuclei -> " << prefix << "_intensity, " << prefix
      << "_truth\n";
  return kExitOk;
}

int cmd_binarize(const std::string &in, const PipelineConfig &cfg, const std::string &mask_path,
                 const std::string &report_path, std::ostream &out) {
  const auto volume = to_float(read_rvol(in));
  cfg.validate(volume.extent().z);
  const auto b = binarize(volume, cfg.binarization);
  write_rvol(mask_path, b.mask);
  if (!report_path.empty()) {
    json report{{"config", to_json(cfg)}, {"input", in}, {"slabs", b.slabs}};
    write_text(report_path, report.dump(2) + "\n");
  }
  std::size_t fg = std::count(b.mask.data().begin(), b.mask.data().end(), std::uint8_t{1});
  out << "binarize: " << fg << " foreground voxels in " << b.slabs.size() << " slab(s)\n";
  return kExitOk;
}

int cmd_segment(const std::string &in, const PipelineConfig &cfg, const std::string &labels_path,
                const std::string &report_path, std::ostream &out) {
  const auto volume = to_float(read_rvol(in));
  const auto result = segment(volume, cfg);
  write_rvol(labels_path, result.labels);
  if (!report_path.empty()) {
    auto f = open_out(report_path);
    json header{{"type", "header"},
                {"input", in},
                {"config", to_json(cfg)},
                {"seed", cfg.partition.seed},
                {"foreground_components", result.foreground_components},
                {"object_count", result.objects.size()},
                {"slabs", result.slabs}};
    f << header.dump() << "\n";
    for (const auto &o : result.objects) f << json(o).dump() << "\n";
    if (!f) throw DataError(report_path + ": write failed");
  }
  out << "segment: " << result.foreground_components << " foreground components -> "
      << result.objects.size() << " objects\n";
  return kExitOk;
}

int cmd_eval(const std::string &pred, const std::string &truth, const std::string &out_path,
             std::ostream &out) {
  const auto report = evaluate(read_labels(pred), read_labels(truth));
  if (!out_path.empty()) write_text(out_path, json(report).dump(2) + "\n");
  out << format_table(report);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app("3D nuclei segmentation by recursive balanced bipartitioning", "nucseg");
  app.require_subcommand(1);

  auto *synth = app.add_subcommand("synth", "generate a synthetic nuclei volume and its truth");
  std::string synth_config, prefix;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--config", synth_config, "scene config (JSON)")->required();
  synth->add_option("--out-prefix", prefix, "writes PREFIX_intensity and PREFIX_truth")->required();
  synth->add_option("--seed", synth_seed, "overrides the scene seed");

  auto *bin = app.add_subcommand("binarize", "foreground mask of a volume");
  std::string bin_in, bin_config, bin_out, bin_report;
  Overrides bin_over;
  bin->add_option("--in", bin_in, "input volume")->required();
  bin->add_option("--config", bin_config, "pipeline config (JSON)");
  bin->add_option("--out", bin_out, "output mask (u8)")->required();
  bin->add_option("--report", bin_report, "per-slab thresholds and models (JSON)");
  bin_over.add_binarization(*bin);

  auto *seg = app.add_subcommand("segment", "binarize and split into nuclei");
  std::string seg_in, seg_config, seg_out, seg_report;
  Overrides seg_over;
  seg->add_option("--in", seg_in, "input volume")->required();
  seg->add_option("--config", seg_config, "pipeline config (JSON)");
  seg->add_option("--out", seg_out, "output labels (u32)")->required();
  seg->add_option("--report", seg_report, "object records (JSON lines)");
  seg_over.add_all(*seg);

  auto *ev = app.add_subcommand("eval", "compare labels against ground truth");
  std::string pred, truth, eval_out;
  ev->add_option("--pred", pred, "predicted labels (u32)")->required();
  ev->add_option("--truth", truth, "ground-truth labels (u32)")->required();
  ev->add_option("--out", eval_out, "report (JSON)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_config, prefix, synth_seed, out);
    if (bin->parsed()) {
      return cmd_binarize(bin_in, load_pipeline(bin_config, bin_over), bin_out, bin_report, out);
    }
    if (seg->parsed()) {
      return cmd_segment(seg_in, load_pipeline(seg_config, seg_over), seg_out, seg_report, out);
    }
    if (ev->parsed()) return cmd_eval(pred, truth, eval_out, out);
  } catch (const InvalidArgument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace nucseg
