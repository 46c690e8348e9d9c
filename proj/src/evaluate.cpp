#include "nucseg/evaluate.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "nucseg/error.hpp"

namespace nucseg {

double EvalReport::percent(std::size_t count) const {
  return gt_count == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(gt_count);
}

void to_json(nlohmann::json &j, const EvalReport &r) {
  j = nlohmann::json{{"gt_count", r.gt_count},
                     {"predicted_count", r.predicted_count},
                     {"added", r.added},
                     {"missed", r.missed},
                     {"merged", r.merged},
                     {"split", r.split},
                     {"added_percent", r.percent(r.added)},
                     {"missed_percent", r.percent(r.missed)},
                     {"merged_percent", r.percent(r.merged)},
                     {"split_percent", r.percent(r.split)}};
}

namespace {

using Overlap = std::map<std::uint32_t, std::size_t>;

// Label with the most voxels; std::map iterates ascending, so ties keep the
// smaller id.
std::uint32_t plurality(const Overlap &overlap) {
  std::uint32_t best = 0;
  std::size_t best_count = 0;
  for (const auto &[label, count] : overlap) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

EvalReport evaluate(const LabelVolume &pred, const LabelVolume &truth) {
  if (pred.extent() != truth.extent()) {
    throw InvalidArgument("evaluate: prediction and truth differ in size");
  }
  std::map<std::uint32_t, Overlap> by_truth;  // g -> o -> count
  std::map<std::uint32_t, Overlap> by_pred;   // o -> g -> count
  const auto p = pred.data();
  const auto t = truth.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (t[i] != 0) ++by_truth[t[i]][p[i]];
    if (p[i] != 0) ++by_pred[p[i]][t[i]];
  }

  EvalReport r;
  r.gt_count = by_truth.size();
  r.predicted_count = by_pred.size();
  std::map<std::uint32_t, std::size_t> truths_per_pred;
  for (const auto &[g, overlap] : by_truth) {
    const auto o = plurality(overlap);
    if (o == 0) {
      ++r.missed;
    } else {
      ++truths_per_pred[o];
    }
  }
  std::map<std::uint32_t, std::size_t> preds_per_truth;
  for (const auto &[o, overlap] : by_pred) {
    const auto g = plurality(overlap);
    if (g == 0) {
      ++r.added;
    } else {
      ++preds_per_truth[g];
    }
  }
  for (const auto &[o, k] : truths_per_pred) r.merged += k - 1;
  for (const auto &[g, k] : preds_per_truth) r.split += k - 1;
  return r;
}

std::string format_table(const EvalReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%8s %8s %14s %14s %14s %14s\n"
                "%8zu %8zu %6zu %6.1f%% %6zu %6.1f%% %6zu %6.1f%% %6zu %6.1f%%\n",
                "gt", "pred", "added", "missed", "merged", "split", r.gt_count, r.predicted_count,
                r.added, r.percent(r.added), r.missed, r.percent(r.missed), r.merged,
                r.percent(r.merged), r.split, r.percent(r.split));
  return buf;
}

}  // namespace nucseg
