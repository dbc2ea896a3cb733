#include "filterlab/stats.hpp"

#include <cmath>

#include "filterlab/errors.hpp"

namespace filterlab {

TrendStatistic mann_kendall(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw ValidationError("trend test needs at least 3 values");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = values[j] - values[i];
      s += d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
  const double nn = static_cast<double>(n);
  const double var = nn * (nn - 1.0) * (2.0 * nn + 5.0) / 18.0;
  TrendStatistic out;
  out.s = s;
  if (s > 0.0)
    out.z = (s - 1.0) / std::sqrt(var);
  else if (s < 0.0)
    out.z = (s + 1.0) / std::sqrt(var);
  return out;
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw ValidationError("fit_line needs equally long vectors");
  const std::size_t n = xs.size();
  if (n < 2) throw ValidationError("fit_line needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line needs distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace filterlab
