#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "filterlab/measure.hpp"
#include "filterlab/noise.hpp"

namespace filterlab {

// Initial law of the signal; realizable both as a sampler and as a measure
// on a grid (where it seeds the filter recursion).
struct InitialDistribution {
  enum class Kind { PointMass, Uniform, Laplace, GridUniform };

  static InitialDistribution point(double x0);
  static InitialDistribution uniform(double a, double b);
  static InitialDistribution laplace(double scale, double center = 0.0);
  static InitialDistribution grid_wide();

  // Round-trippable text form: "point:0", "uniform:-2,2", "laplace:1",
  // "laplace:1,0.5", "grid-uniform".
  static InitialDistribution from_descriptor(const std::string& text);
  std::string describe() const;

  double sample(SplitMix64& rng) const;
  GridMeasure on_grid(const GridSpec& grid) const;

  Kind kind = Kind::PointMass;
  double a = 0.0;  // point: x0; uniform: left end; laplace: scale
  double b = 0.0;  // uniform: right end; laplace: center
};

// Continuous-state system X_{n+1} = X_n + drift(X_n) + xi_{n+1},
// Y_n = obs_map(X_n) + V_n.
struct ModelSpec {
  std::function<double(double)> drift;
  std::function<double(double)> obs_map;
  NoiseDensity signal_noise;
  NoiseDensity obs_noise;
  InitialDistribution initial;
};

// Compactly supported misspecification: drift and observation map are offset
// inside |x| <= support_radius and untouched outside; noises may be replaced
// wholesale.
struct PerturbationSpec {
  static PerturbationSpec none();
  // drift offset of size eps on |x| <= radius, zero outside
  static PerturbationSpec drift_bump(double eps, double radius);

  std::function<double(double)> drift_delta;
  std::function<double(double)> obs_delta;
  double support_radius = 0.0;
  std::optional<NoiseDensity> signal_noise;
  std::optional<NoiseDensity> obs_noise;
};

ModelSpec apply_perturbation(const ModelSpec& spec, const PerturbationSpec& pert);

struct DiscretizeOptions {
  // Hard error when a transition row loses more than this much mass past the
  // grid hull before renormalization. The strict default catches grids whose
  // hull the dynamics escape; wide-tailed models on truncated grids must opt
  // into a looser gate explicitly.
  double max_row_truncation = 1e-3;
};

// Grid model: row-stochastic transition matrix plus a likelihood function
// evaluated lazily from the observation map and noise. transition(i, j) is
// the mass moved from node i to node j; prediction is measure-times-matrix.
class DiscreteModel {
public:
  DiscreteModel(const GridSpec& grid, std::vector<double> transition_row_major,
                std::vector<double> obs_map_at_nodes, NoiseDensity obs_noise);

  const GridSpec& grid() const { return grid_; }
  const double* transition_data() const { return transition_.data(); }
  double transition(int i, int j) const {
    return transition_[static_cast<std::size_t>(i) * grid_.points +
                       static_cast<std::size_t>(j)];
  }
  double likelihood(int i, double y) const {
    return obs_noise_.pdf(y - obs_map_[static_cast<std::size_t>(i)]);
  }
  void likelihood_row(double y, std::span<double> out) const;

  std::span<const double> obs_map_at_nodes() const { return obs_map_; }
  const NoiseDensity& obs_noise() const { return obs_noise_; }

  // Mass each row lost past the hull before renormalization (zeros for
  // directly constructed matrices).
  std::span<const double> row_truncation() const { return truncation_; }

private:
  friend DiscreteModel discretize(const ModelSpec&, const GridSpec&,
                                  const DiscretizeOptions&);

  GridSpec grid_;
  std::vector<double> transition_;
  std::vector<double> obs_map_;
  NoiseDensity obs_noise_;
  std::vector<double> truncation_;
};

DiscreteModel discretize(const ModelSpec& spec, const GridSpec& grid,
                         const DiscretizeOptions& opts = {});

struct TrajectorySample {
  std::uint64_t seed = 0;
  std::vector<double> states;        // X_0 .. X_n
  std::vector<double> observations;  // Y_1 .. Y_n
};

TrajectorySample sample_trajectory(const ModelSpec& spec, int n, std::uint64_t seed);

// Named presets reachable from CLI configs:
//   "laplace-contractive": drift -0.5*sign(x)*min(|x|,2), obs gain*tanh(x),
//                          Laplace(1) noises
//   "laplace-linear":      drift -0.5*x, otherwise as above
ModelSpec make_preset(const std::string& name, double obs_gain);

}  // namespace filterlab
