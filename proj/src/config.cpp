#include "nucseg/config.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "nucseg/error.hpp"

namespace nucseg {

namespace {

using nlohmann::json;

// Reads keys of one JSON object, remembering which were consumed so that
// leftovers can be reported.
class Section {
 public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(where("") + ": expected a JSON object");
  }

  template <typename T>
  void read(const std::string &key, T &out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception &) {
      throw InvalidArgument(where(key) + ": wrong type");
    }
  }

  template <typename T>
  void read(const std::string &key, std::optional<T> &out) {
    if (!j_.contains(key)) {
      seen_.insert(key);
      return;
    }
    T value{};
    read(key, value);
    out = std::move(value);
  }

  /// Sub-object at key, or nullptr when absent.
  const json *child(const std::string &key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto &item : j_.items()) {
      if (!seen_.count(item.key())) throw InvalidArgument(where(item.key()) + ": unknown key");
    }
  }

  [[nodiscard]] std::string where(const std::string &key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Parse, typename E>
void read_enum(Section &s, const std::string &key, E &out, Parse parse) {
  std::optional<std::string> name;
  s.read(key, name);
  if (!name) return;
  try {
    out = parse(*name);
  } catch (const std::exception &) {
    throw InvalidArgument(s.where(key) + ": unknown value '" + *name + "'");
  }
}

std::string to_string(WeightSource source) {
  return source == WeightSource::Smoothed ? "smoothed" : "raw";
}

WeightSource parse_weight_source(const std::string &name) {
  if (name == "smoothed") return WeightSource::Smoothed;
  if (name == "raw") return WeightSource::Raw;
  throw InvalidArgument("weights.source: unknown value '" + name + "'");
}

}  // namespace

json to_json(const PipelineConfig &c) {
  return json{{"binarization",
               {{"method", to_string(c.binarization.method)},
                {"sigma_s", c.binarization.sigma_s},
                {"m", c.binarization.slabs}}},
              {"weights",
               {{"scheme", to_string(c.weights.scheme)},
                {"sigma_grad", c.weights.sigma_grad},
                {"source", to_string(c.weight_source)}}},
              {"partition",
               {{"epsilon", c.partition.epsilon},
                {"seed", c.partition.seed},
                {"coarsen_floor", c.partition.coarsen_floor},
                {"fm_passes", c.partition.fm_passes},
                {"initial_attempts", c.partition.initial_attempts},
                {"fm_stall_moves", c.partition.fm_stall_moves}}},
              {"model",
               {{"v_min", c.model.v_min},
                {"v_max", c.model.v_max},
                {"lambda", c.model.lambda},
                {"psi_min", c.model.psi_min},
                {"psi_ideal", c.model.psi_ideal}}},
              {"threads", c.threads}};
}

PipelineConfig pipeline_config_from_json(const json &j, PipelineConfig c) {
  Section root(j, "");
  if (const auto *b = root.child("binarization")) {
    Section s(*b, "binarization");
    read_enum(s, "method", c.binarization.method, parse_threshold_method);
    s.read("sigma_s", c.binarization.sigma_s);
    s.read("m", c.binarization.slabs);
    s.finish();
  }
  if (const auto *w = root.child("weights")) {
    Section s(*w, "weights");
    read_enum(s, "scheme", c.weights.scheme, parse_weight_scheme);
    s.read("sigma_grad", c.weights.sigma_grad);
    read_enum(s, "source", c.weight_source, parse_weight_source);
    s.finish();
  }
  if (const auto *p = root.child("partition")) {
    Section s(*p, "partition");
    s.read("epsilon", c.partition.epsilon);
    s.read("seed", c.partition.seed);
    s.read("coarsen_floor", c.partition.coarsen_floor);
    s.read("fm_passes", c.partition.fm_passes);
    s.read("initial_attempts", c.partition.initial_attempts);
    s.read("fm_stall_moves", c.partition.fm_stall_moves);
    s.finish();
  }
  if (const auto *m = root.child("model")) {
    Section s(*m, "model");
    s.read("v_min", c.model.v_min);
    s.read("v_max", c.model.v_max);
    s.read("lambda", c.model.lambda);
    s.read("psi_min", c.model.psi_min);
    s.read("psi_ideal", c.model.psi_ideal);
    s.finish();
  }
  root.read("threads", c.threads);
  root.finish();
  c.model.epsilon = c.partition.epsilon;
  return c;
}

json to_json(const SceneConfig &c) {
  json j{{"size", {c.size.x, c.size.y, c.size.z}},
         {"spacing", {c.spacing.x, c.spacing.y, c.spacing.z}},
         {"nucleus_count", c.nucleus_count},
         {"semi_axis_min", c.semi_axis_min},
         {"semi_axis_max", c.semi_axis_max},
         {"clustering", c.clustering},
         {"mu_b", c.mu_b},
         {"mu_f", c.mu_f},
         {"noise_sigma", c.noise_sigma},
         {"psf_sigma", c.psf_sigma},
         {"seed", c.seed},
         {"attenuation", c.attenuation}};
  j["background_end"] = c.background_end.value_or(c.mu_b);
  return j;
}

SceneConfig scene_config_from_json(const json &j, SceneConfig c) {
  Section s(j, "");
  std::array<std::size_t, 3> size{c.size.x, c.size.y, c.size.z};
  std::array<double, 3> spacing{c.spacing.x, c.spacing.y, c.spacing.z};
  s.read("size", size);
  s.read("spacing", spacing);
  c.size = {size[0], size[1], size[2]};
  c.spacing = {spacing[0], spacing[1], spacing[2]};
  s.read("nucleus_count", c.nucleus_count);
  s.read("semi_axis_min", c.semi_axis_min);
  s.read("semi_axis_max", c.semi_axis_max);
  s.read("clustering", c.clustering);
  s.read("mu_b", c.mu_b);
  s.read("mu_f", c.mu_f);
  s.read("noise_sigma", c.noise_sigma);
  s.read("psf_sigma", c.psf_sigma);
  s.read("seed", c.seed);
  s.read("attenuation", c.attenuation);
  if (const auto *b = s.child("background_end")) {
    if (!b->is_number()) throw InvalidArgument("background_end: wrong type");
    c.background_end = b->get<double>();
  }
  s.finish();
  return c;
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace nucseg
