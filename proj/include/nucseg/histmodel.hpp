#pragma once

// Gray-level histogram model for blurred fluorescence images: a normal
// non-illuminated background NB, an illuminated-background term IB that
// decays from the foreground level toward the background, and a normal
// foreground F.
//
//   NB(i) = p_b / (sqrt(2 pi) sigma_b) * exp(-(i - mu_b)^2 / (2 sigma_b^2))
//   IB(i) = 2 alpha p_f / (i - mu_b) * log((mu_f - mu_b) / (i - mu_b)),
//           only for i in [mu_b + 2 sigma_b, mu_f), zero elsewhere
//   F(i)  = p_f / (sqrt(2 pi) sigma_f) * exp(-(i - mu_f)^2 / (2 sigma_f^2))
//   B(i)  = NB(i) + IB(i),  h_model(i) = B(i) + F(i)

#include <limits>
#include <vector>

#include <json.hpp>

#include "nucseg/histogram.hpp"

namespace nucseg {

struct HistogramModel {
  double p_b = 0.5;
  double mu_b = 0.0;
  double sigma_b = 1.0;
  double p_f = 0.5;
  double mu_f = 1.0;
  double sigma_f = 1.0;
  double alpha = 0.01;

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;
};

void to_json(nlohmann::json &j, const HistogramModel &m);
void from_json(const nlohmann::json &j, HistogramModel &m);

struct ModelTerms {
  double nb = 0.0;
  double ib = 0.0;
  double f = 0.0;

  [[nodiscard]] double background() const { return nb + ib; }
  [[nodiscard]] double total() const { return nb + ib + f; }
};

/// Evaluates the three model terms at gray level i. Levels outside
/// [0, max_level] are rejected.
[[nodiscard]] ModelTerms model_eval(const HistogramModel &m, double i,
                                    double max_level = std::numeric_limits<double>::infinity());

/// Initial model from the isodata threshold: class masses and means, unit
/// standard deviations and alpha = 0.01.
[[nodiscard]] HistogramModel iterative_threshold_init(const Histogram &histogram);

struct EmOptions {
  int max_iterations = 50;
  double tolerance = 1e-4;  ///< on the largest relative parameter change
  double sigma_floor = 0.5;
  bool fit_alpha = true;
};

struct EmFit {
  HistogramModel model;
  int iterations = 0;
  bool converged = false;
  /// sum_i h(i) log h_model(i), before the first and after every iteration.
  std::vector<double> log_likelihood;
};

/// EM fit of the NB + IB + F mixture to a histogram. Throws FitError when the
/// fit degenerates (a class loses all its mass or the means cross).
[[nodiscard]] EmFit em_fit_detailed(const Histogram &histogram, const HistogramModel &init,
                                    const EmOptions &options = {});

[[nodiscard]] inline HistogramModel em_fit(const Histogram &histogram, const HistogramModel &init,
                                           const EmOptions &options = {}) {
  return em_fit_detailed(histogram, init, options).model;
}

/// sum_i h(i) log h_model(i) over occupied levels.
[[nodiscard]] double log_likelihood(const Histogram &histogram, const HistogramModel &m);

/// Smallest integer level in (mu_b, mu_f] where F(i) >= B(i). Values above it
/// are foreground. Throws FitError when F never reaches B.
[[nodiscard]] int model_threshold(const HistogramModel &m);

inline constexpr double kPosteriorFloor = 1e-9;

/// P(B | i) = B(i) / h_model(i), clamped to [1e-9, 1].
[[nodiscard]] double background_posterior(const HistogramModel &m, double i);

}  // namespace nucseg
