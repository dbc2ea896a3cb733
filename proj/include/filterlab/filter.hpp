#pragma once

#include <span>
#include <vector>

#include "filterlab/measure.hpp"
#include "filterlab/model.hpp"

namespace filterlab {

enum class ModelTag { TrueModel, WrongModel };

struct FilterStepResult {
  GridMeasure posterior;
  double log_normalizer;  // ln of the unnormalized corrected mass
};

// One Bayes step: predict mu through the transition matrix, weight node j by
// likelihood(j, y), renormalize. Runs in linear space with a log-normalizer
// so long horizons cannot underflow the evidence.
FilterStepResult filter_step(const DiscreteModel& model, const GridMeasure& mu,
                             double y);

// Posterior sequence mu_0..mu_n plus per-step log-normalizers; their partial
// sums are the log evidence of the observation prefixes.
struct FilterTrace {
  std::vector<GridMeasure> measures;
  std::vector<double> step_log_normalizers;
  ModelTag tag = ModelTag::TrueModel;

  double total_log_evidence() const;
};

FilterTrace run_filter(const DiscreteModel& model, const GridMeasure& mu0,
                       std::span<const double> observations,
                       ModelTag tag = ModelTag::TrueModel);

// Iterated filter_step over an observation window; the empty window is the
// identity.
GridMeasure multi_step(const DiscreteModel& model, const GridMeasure& mu,
                       std::span<const double> observations);

}  // namespace filterlab
