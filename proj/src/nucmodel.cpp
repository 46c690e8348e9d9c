#include "nucseg/nucmodel.hpp"

#include "nucseg/error.hpp"

namespace nucseg {

void NucleusModelParams::validate() const {
  if (!(v_min > 0.0)) throw InvalidArgument("model.v_min: must be > 0");
  if (!(v_max > v_min)) throw InvalidArgument("model.v_max: must exceed v_min");
  if (!(lambda > 0.0 && lambda < 0.5)) throw InvalidArgument("model.lambda: must lie in (0, 0.5)");
  if (!(psi_min > 0.0)) throw InvalidArgument("model.psi_min: must be > 0");
  if (!(psi_ideal > psi_min && psi_ideal <= 1.0)) {
    throw InvalidArgument("model.psi_ideal: must lie in (psi_min, 1]");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("partition.epsilon: must be > 0");
  if ((1.0 + lambda) * v_min > (1.0 - lambda) * v_max) {
    throw InvalidArgument("model.v_max: volume trapezoid knots out of order for this lambda");
  }
}

double trapezoid(double x, double a, double b, double c, double d) {
  if (!(a <= b && b <= c && c <= d)) {
    throw InvalidArgument("trapezoid: knots must satisfy a <= b <= c <= d");
  }
  if (x >= a && x < b) return (x - a) / (b - a);
  if (x >= b && x < c) return 1.0;
  if (x >= c && x < d) return (d - x) / (d - c);
  return 0.0;
}

double volume_membership(double volume, const NucleusModelParams &p) {
  return trapezoid(volume, p.v_min, (1.0 + p.lambda) * p.v_min, (1.0 - p.lambda) * p.v_max,
                   p.v_max);
}

double sphericity_membership(double psi, const NucleusModelParams &p) {
  if (psi <= p.psi_min) return 0.0;
  if (psi >= p.psi_ideal) return 1.0;
  const double r = (psi - p.psi_min) / (p.psi_ideal - p.psi_min);
  return r * r;
}

double component_score(double volume, double psi, const NucleusModelParams &params) {
  return volume_membership(volume, params) * sphericity_membership(psi, params);
}

std::string to_string(Decision decision) {
  switch (decision) {
    case Decision::Keep:
      return "keep";
    case Decision::Discard:
      return "discard";
    case Decision::Repartition:
      return "repartition";
  }
  return "?";
}

ScoredDecision decide(double volume, const std::function<double()> &sphericity,
                      double parent_score, const NucleusModelParams &params) {
  ScoredDecision out;
  out.volume = volume;
  if (volume < params.v_min) {
    out.decision = Decision::Discard;
    return out;
  }
  out.sphericity = sphericity();
  out.score = component_score(volume, out.sphericity, params);
  if (out.score > 0.5) {
    out.decision = Decision::Keep;
  } else if (volume >= params.repartition_volume()) {
    out.decision = Decision::Repartition;
  } else if (out.score * (1.0 - parent_score) > parent_score) {
    out.decision = Decision::Keep;
  } else {
    out.decision = Decision::Discard;
  }
  return out;
}

ScoredDecision score_function(const Component &component, double parent_score,
                              const ScoringContext &context) {
  return decide(
      volume_of(component, context.weights.spacing),
      [&] { return sphericity(component, context.weights, context.extent); }, parent_score,
      context.params);
}

}  // namespace nucseg
