#pragma once

#include <cmath>

#include "filterlab/errors.hpp"

namespace filterlab {

// Uniform one-dimensional grid with `points` nodes spanning [lower, upper].
// All measures, transition matrices and likelihood tables in this library are
// indexed against a GridSpec; mixing objects from different grids throws.
struct GridSpec {
  GridSpec(double lower_bound, double upper_bound, int node_count)
      : lower(lower_bound), upper(upper_bound), points(node_count) {
    if (!std::isfinite(lower) || !std::isfinite(upper))
      throw ValidationError("grid bounds must be finite");
    if (!(lower < upper))
      throw ValidationError("grid requires lower < upper");
    if (points < 2)
      throw ValidationError("grid requires at least 2 points");
  }

  double spacing() const { return (upper - lower) / (points - 1); }

  double coord(int i) const { return lower + i * spacing(); }

  // Index of the node closest to x, clamped to the grid.
  int nearest_index(double x) const {
    if (x <= lower) return 0;
    if (x >= upper) return points - 1;
    int i = static_cast<int>(std::lround((x - lower) / spacing()));
    if (i < 0) i = 0;
    if (i > points - 1) i = points - 1;
    return i;
  }

  bool operator==(const GridSpec& other) const {
    return lower == other.lower && upper == other.upper && points == other.points;
  }

  double lower;
  double upper;
  int points;
};

}  // namespace filterlab
