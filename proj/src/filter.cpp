#include "filterlab/filter.hpp"

#include <cmath>

#include "filterlab/errors.hpp"
#include "filterlab/kernels.hpp"

namespace filterlab {

FilterStepResult filter_step(const DiscreteModel& model, const GridMeasure& mu,
                             double y) {
  if (!(mu.grid() == model.grid()))
    throw GridMismatchError("measure grid does not match model grid");
  const auto n = static_cast<std::size_t>(model.grid().points);

  std::vector<double> predicted(n);
  kernels::vec_mat_mul(mu.data(), model.transition_data(), predicted.data(), n, n);

  std::vector<double> lik(n);
  model.likelihood_row(y, lik);

  std::vector<double> corrected(n);
  double mass = kernels::mul_sum(predicted.data(), lik.data(), corrected.data(), n);
  if (mass <= 0.0)
    throw AllZeroMassError("corrected mass vanished; likelihood underflowed");

  double log_norm = 0.0;
  if (mass < 1e-300) {
    // Rescale by the max before normalizing so the division cannot flush
    // surviving weights to zero.
    const double peak = kernels::max_val(corrected.data(), n);
    kernels::scale(corrected.data(), 1.0 / peak, n);
    mass = kernels::sum(corrected.data(), n);
    log_norm = std::log(mass) + std::log(peak);
  } else {
    log_norm = std::log(mass);
  }

  auto normalized = GridMeasure::normalize(model.grid(), std::move(corrected));
  return {std::move(normalized.measure), log_norm};
}

double FilterTrace::total_log_evidence() const {
  double acc = 0.0;
  for (double v : step_log_normalizers) acc += v;
  return acc;
}

FilterTrace run_filter(const DiscreteModel& model, const GridMeasure& mu0,
                       std::span<const double> observations, ModelTag tag) {
  if (observations.empty())
    throw ValidationError("run_filter needs at least one observation");
  FilterTrace trace;
  trace.tag = tag;
  trace.measures.reserve(observations.size() + 1);
  trace.step_log_normalizers.reserve(observations.size());
  trace.measures.push_back(mu0);
  for (double y : observations) {
    auto step = filter_step(model, trace.measures.back(), y);
    trace.measures.push_back(std::move(step.posterior));
    trace.step_log_normalizers.push_back(step.log_normalizer);
  }
  return trace;
}

GridMeasure multi_step(const DiscreteModel& model, const GridMeasure& mu,
                       std::span<const double> observations) {
  GridMeasure current = mu;
  for (double y : observations)
    current = filter_step(model, current, y).posterior;
  return current;
}

}  // namespace filterlab
