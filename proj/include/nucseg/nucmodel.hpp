#pragma once

#include <functional>
#include <string>

#include "nucseg/components.hpp"
#include "nucseg/geometry.hpp"

namespace nucseg {

struct NucleusModelParams {
  double v_min = 20000.0;
  double v_max = 39000.0;
  double lambda = 0.2;
  double psi_min = 0.81;
  double psi_ideal = 0.96;
  double epsilon = 0.5;  ///< partitioner imbalance factor

  void validate() const;

  /// Smallest volume whose balanced split can still yield a child of v_min:
  /// the larger child holds at most (1 + eps) / 2 of its parent.
  [[nodiscard]] double repartition_volume() const { return 2.0 * v_min / (1.0 + epsilon); }
};

/// Trapezoidal membership with knots a <= b <= c <= d: rises on [a, b), is 1
/// on [b, c), falls on [c, d), 0 elsewhere.
[[nodiscard]] double trapezoid(double x, double a, double b, double c, double d);

[[nodiscard]] double volume_membership(double volume, const NucleusModelParams &params);

/// 0 up to psi_min, ((psi - psi_min) / (psi_ideal - psi_min))^2 in between,
/// 1 from psi_ideal on.
[[nodiscard]] double sphericity_membership(double psi, const NucleusModelParams &params);

[[nodiscard]] double component_score(double volume, double psi, const NucleusModelParams &params);

enum class Decision { Keep, Discard, Repartition };

[[nodiscard]] std::string to_string(Decision decision);

struct ScoredDecision {
  Decision decision = Decision::Discard;
  double score = 0.0;
  double volume = 0.0;
  double sphericity = 0.0;  ///< 0 when never computed (volume below v_min)
};

/// The keep / discard / repartition rule. Sphericity is only evaluated for
/// components of at least v_min.
///   V < v_min                        -> discard, score 0
///   s > 0.5                          -> keep
///   V >= repartition_volume()        -> repartition
///   s (1 - s_parent) > s_parent      -> keep
///   otherwise                        -> discard
[[nodiscard]] ScoredDecision decide(double volume, const std::function<double()> &sphericity,
                                    double parent_score, const NucleusModelParams &params);

struct ScoringContext {
  NucleusModelParams params;
  CutMetricWeights weights;  ///< 26-neighborhood, for the volume's spacing
  Extent extent;
};

[[nodiscard]] ScoredDecision score_function(const Component &component, double parent_score,
                                            const ScoringContext &context);

}  // namespace nucseg
