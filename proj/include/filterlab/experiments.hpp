#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filterlab/assumptions.hpp"
#include "filterlab/filter.hpp"
#include "filterlab/model.hpp"

namespace filterlab {

// One Monte Carlo run, fully determined by its fields (plus the seed).
struct ExperimentConfig {
  std::string preset = "laplace-contractive";
  double obs_gain = 0.05;
  GridSpec grid{-20.0, 20.0, 401};
  // Mass a discretized transition row may lose past the hull. Wider than the
  // library default because the reference grid truncates Laplace tails near
  // the boundary by design; the gate still rejects dynamics escaping the hull.
  double truncation_gate = 0.5;
  double perturbation_eps = 0.01;
  double perturbation_radius = 2.0;
  int horizon = 200;
  int replicas = 500;
  std::uint64_t seed = 1;
  double c = 0.1;     // moment exponent fed into the A4 scan
  double radius = 5.0;  // ball for A2/A4
  InitialDistribution mu0 = InitialDistribution::point(0.0);
  std::optional<InitialDistribution> nu0;  // second initial (forgetting)

  void validate() const;
  // Flat `name = value` echo for report headers.
  std::string serialize() const;
};

// The configured model pair, discretized and ready to filter.
struct ModelPair {
  ModelSpec true_spec;
  ModelSpec wrong_spec;
  DiscreteModel true_model;
  DiscreteModel wrong_model;
};
ModelPair build_models(const ExperimentConfig& config);

// Per-step averages of the TV gap between the exact and wrong filters run on
// shared true-model observations. Uncertified runs still produce numbers;
// `certified` says whether the theorems stand behind them.
struct StabilityReport {
  AssumptionReport assumptions;
  bool certified = false;
  int replicas = 0;
  int horizon = 0;
  std::vector<double> mean_tv;    // index k-1 holds step k
  std::vector<double> stderr_tv;
  double sup_mean_tv = 0.0;
};
StabilityReport stability_experiment(const ExperimentConfig& config);

// Same model, two initial measures, shared observations: how fast the two
// posteriors merge.
struct ForgettingReport {
  AssumptionReport assumptions;
  bool certified = false;
  int replicas = 0;
  int horizon = 0;
  std::vector<double> mean_tv;
  std::vector<double> stderr_tv;
  double initial_birkhoff = 0.0;  // +inf allowed; the rate claim survives it
  bool alpha_defined = false;     // needs >= 5 fit points above the floor
  double alpha_hat = 0.0;
  double r_squared = 0.0;
  int fit_begin = 0, fit_end = 0;  // step window the fit used, [begin, end)
};
ForgettingReport forgetting_experiment(const ExperimentConfig& config);

// Signed decomposition terms of (wrong posterior - exact posterior) at the
// final step: one term per substitution point k = 1..n, each a node-weight
// difference vector. Terms sum to the final difference node-wise.
std::vector<std::vector<double>> telescoping_diagnostic(
    const DiscreteModel& true_model, const DiscreteModel& wrong_model,
    const GridMeasure& mu0, std::span<const double> observations);

// For each step k of a wrong-filter trace: projective distance between the
// realized wrong posterior and one exact step taken from the same
// predecessor. Certified runs keep every entry at or below q.
std::vector<double> per_step_birkhoff_probe(const DiscreteModel& true_model,
                                            const DiscreteModel& wrong_model,
                                            const FilterTrace& trace,
                                            std::span<const double> observations);

// Largest exp_moment along a trace; compare against certified_moment_ceiling.
double moment_stability_probe(const FilterTrace& trace, double c);

// K'/(1 - rho') + exp_moment(mu0, c): the uniform-in-time moment ceiling a
// certified report guarantees for every filter trace started at mu0.
double certified_moment_ceiling(const AssumptionReport& report, const GridMeasure& mu0);

// CSV bodies (metadata as `#` lines, then a header row, then one row per
// step). Deterministic formatting: %.17g, '\n' newlines.
std::string stability_csv(const StabilityReport& report, const ExperimentConfig& config);
std::string forgetting_csv(const ForgettingReport& report, const ExperimentConfig& config);

}  // namespace filterlab
