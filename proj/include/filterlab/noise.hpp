#pragma once

#include <vector>

#include "filterlab/grid.hpp"
#include "filterlab/rng.hpp"

namespace filterlab {

// Univariate noise density with unit integral. Laplace and PolynomialTail are
// analytic and strictly positive; Tabulated is a step density on a grid and
// may carry zeros (the positivity checker is what rejects those, not the
// constructor, so violation fixtures can be built).
class NoiseDensity {
public:
  enum class Kind { Laplace, PolynomialTail, Tabulated };

  NoiseDensity() = default;  // Laplace(1)

  static NoiseDensity laplace(double scale);

  // Flat core of half-width `core_radius`, power tail c*(1+|y|)^-exponent
  // beyond it; requires exponent > 1, core_radius >= 0. Symmetric, heavy
  // tailed: no exponential moment of |Y| exists.
  static NoiseDensity polynomial_tail(double exponent, double core_radius);

  // Step density with node values `values` (nonnegative, not all zero),
  // rescaled so the Riemann sum over the grid is one. Outside the grid the
  // density takes the nearest boundary value.
  static NoiseDensity tabulated(const GridSpec& grid, std::vector<double> values);

  Kind kind() const { return kind_; }
  double pdf(double x) const;
  double sample(SplitMix64& rng) const;  // inverse CDF in every case
  double mean() const;

  // E exp(eps|X|); +infinity when the moment diverges (Laplace with
  // eps >= 1/scale, PolynomialTail always). Requires eps > 0.
  double exp_abs_moment(double eps) const;

  bool strictly_positive() const;

  // Half-width scale used to seed observation probe ranges.
  double characteristic_width() const;

  bool operator==(const NoiseDensity& other) const;

private:
  Kind kind_ = Kind::Laplace;
  double scale_ = 1.0;        // Laplace
  double exponent_ = 2.0;     // PolynomialTail m
  double core_radius_ = 0.0;  // PolynomialTail M
  double tail_coeff_ = 0.0;   // PolynomialTail normalizer c
  double grid_lower_ = 0.0, grid_upper_ = 0.0;  // Tabulated grid (rebuilt on demand)
  int grid_points_ = 0;
  std::vector<double> values_;      // Tabulated density values (normalized)
  std::vector<double> cumulative_;  // Tabulated atom CDF for sampling
};

}  // namespace filterlab
