#pragma once

#include <span>

namespace filterlab {

// Mann-Kendall trend statistic. z is the normal-approximation score with
// continuity correction; positive z means an increasing trend. The one-sided
// 95% critical value is 1.6449 (reject "no increasing trend" when z exceeds
// it). No tie correction: the tested sequences are continuous averages, and
// the all-tied degenerate case yields S = 0, z = 0.
struct TrendStatistic {
  double s = 0.0;
  double z = 0.0;
};
TrendStatistic mann_kendall(std::span<const double> values);

inline constexpr double kTrendCritical95 = 1.6449;

// Ordinary least squares line fit; r_squared is 1 for a perfect (or
// zero-variance) fit.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace filterlab
