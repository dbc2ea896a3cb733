#pragma once

#include <span>
#include <vector>

#include "filterlab/grid.hpp"

namespace filterlab {

struct NormalizedMeasure;

// Probability measure on a grid: nonnegative node weights with total mass
// one (to within ~1e-15; normalize() enforces this). Instances are immutable,
// so they are safe to share across threads and to keep in traces.
class GridMeasure {
public:
  // Rescales `weights` to total mass one. Throws NegativeWeightError on a
  // negative or non-finite entry and AllZeroMassError when everything is 0.
  static NormalizedMeasure normalize(const GridSpec& grid, std::vector<double> weights);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  const double* data() const { return weights_.data(); }
  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }

private:
  GridMeasure(const GridSpec& grid, std::vector<double> weights)
      : grid_(grid), weights_(std::move(weights)) {}

  GridSpec grid_;
  std::vector<double> weights_;
};

struct NormalizedMeasure {
  GridMeasure measure;
  double mass;  // total mass before renormalization
};

// Point mass at the grid node nearest to x.
GridMeasure point_mass(const GridSpec& grid, double x);

// Uniform over the grid nodes inside [a, b] (requires at least one node there).
GridMeasure uniform_on(const GridSpec& grid, double a, double b);

// Uniform over every node of the grid.
GridMeasure grid_uniform(const GridSpec& grid);

// Discretized Laplace(scale) law centered at `center`.
GridMeasure laplace_on(const GridSpec& grid, double scale, double center = 0.0);

// sum_i |mu_i - nu_i|; ranges over [0, 2].
double tv_distance(const GridMeasure& mu, const GridMeasure& nu);

// Projective (Hilbert-type) distance: ln sup(mu/nu) + ln sup(nu/mu).
// Returns +infinity when exactly one of the measures vanishes at some node;
// nodes where both vanish are skipped. Zero iff the measures are equal.
double birkhoff_distance(const GridMeasure& mu, const GridMeasure& nu);

// sum_i mu_i * exp(c * |x_i|); requires c > 0.
double exp_moment(const GridMeasure& mu, double c);

}  // namespace filterlab
