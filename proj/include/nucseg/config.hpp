#pragma once

#include <filesystem>

#include <json.hpp>

#include "nucseg/splitter.hpp"
#include "nucseg/synthgen.hpp"

namespace nucseg {

// JSON forms of the run configurations. Every section and key is optional;
// absent keys keep their defaults, unknown keys are rejected with their
// dotted path (e.g. "partition.epsilon").

[[nodiscard]] nlohmann::json to_json(const PipelineConfig &config);
/// Overlays `j` onto `base`. Throws InvalidArgument naming the offending field.
[[nodiscard]] PipelineConfig pipeline_config_from_json(const nlohmann::json &j,
                                                       PipelineConfig base = {});

[[nodiscard]] nlohmann::json to_json(const SceneConfig &config);
[[nodiscard]] SceneConfig scene_config_from_json(const nlohmann::json &j, SceneConfig base = {});

/// Parses a JSON file; throws DataError when it cannot be read or parsed.
[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path &path);

}  // namespace nucseg
