#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "nucseg/volume.hpp"

namespace nucseg {

struct EvalReport {
  std::size_t gt_count = 0;
  std::size_t predicted_count = 0;
  std::size_t added = 0;
  std::size_t missed = 0;
  std::size_t merged = 0;
  std::size_t split = 0;

  /// 100 * count / gt_count; 0 when there is no ground truth.
  [[nodiscard]] double percent(std::size_t count) const;
  [[nodiscard]] std::size_t total_errors() const { return added + missed + merged + split; }
  bool operator==(const EvalReport &) const = default;
};

void to_json(nlohmann::json &j, const EvalReport &report);

/// Plurality-overlap matching of predicted objects against ground truth.
/// Each truth nucleus maps to the predicted label (or background) covering
/// most of its voxels, and each predicted object to the truth label covering
/// most of its voxels; ties go to the smaller id. A k-way merge counts k - 1.
[[nodiscard]] EvalReport evaluate(const LabelVolume &pred, const LabelVolume &truth);

/// One-row table: gt, pred, then added / missed / merged / split as count and
/// percentage.
[[nodiscard]] std::string format_table(const EvalReport &report);

}  // namespace nucseg
