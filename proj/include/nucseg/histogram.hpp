#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nucseg {

/// Absolute frequencies of the gray levels 0..K.
class Histogram {
 public:
  Histogram() = default;
  explicit Histogram(std::vector<std::uint64_t> counts);

  /// Histogram of integer-valued samples; K is the largest sample.
  template <typename T>
  static Histogram of(std::span<const T> samples) {
    std::vector<std::uint64_t> counts;
    for (const T s : samples) {
      const auto level = static_cast<std::size_t>(s);
      if (level >= counts.size()) counts.resize(level + 1, 0);
      ++counts[level];
    }
    return Histogram(std::move(counts));
  }

  [[nodiscard]] const std::vector<std::uint64_t> &counts() const { return counts_; }
  [[nodiscard]] std::uint64_t total() const { return total_; }
  /// Largest representable level K.
  [[nodiscard]] int max_level() const { return static_cast<int>(counts_.size()) - 1; }
  [[nodiscard]] std::uint64_t operator[](std::size_t level) const { return counts_[level]; }
  /// Normalized frequency h(i) = counts(i) / total.
  [[nodiscard]] double frequency(std::size_t level) const {
    return static_cast<double>(counts_[level]) / static_cast<double>(total_);
  }
  [[nodiscard]] std::size_t occupied_levels() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Level t maximizing the between-class variance of {<= t} and {> t}. Ties go
/// to the smaller t. Throws DataError when fewer than two levels are occupied.
[[nodiscard]] int otsu_threshold(const Histogram &histogram);

/// Ridler-Calvard isodata threshold: starting at the histogram mean, t is
/// replaced by the mid-point of the class means until it stops moving.
/// Class "below" is {i <= t}.
[[nodiscard]] double isodata_threshold(const Histogram &histogram, int max_iterations = 100);

}  // namespace nucseg
