#include "filterlab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filterlab/errors.hpp"

namespace filterlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NoiseDensity NoiseDensity::laplace(double scale) {
  if (!(scale > 0.0)) throw ValidationError("Laplace scale must be positive");
  NoiseDensity d;
  d.kind_ = Kind::Laplace;
  d.scale_ = scale;
  return d;
}

NoiseDensity NoiseDensity::polynomial_tail(double exponent, double core_radius) {
  if (!(exponent > 1.0))
    throw ValidationError("polynomial tail exponent must exceed 1");
  if (!(core_radius >= 0.0))
    throw ValidationError("polynomial tail core radius must be nonnegative");
  NoiseDensity d;
  d.kind_ = Kind::PolynomialTail;
  d.exponent_ = exponent;
  d.core_radius_ = core_radius;
  // Unit mass: 2c [ M (1+M)^-m + (1+M)^(1-m) / (m-1) ].
  const double m = exponent, M = core_radius;
  d.tail_coeff_ = std::pow(1.0 + M, m) / (2.0 * (M + (1.0 + M) / (m - 1.0)));
  return d;
}

NoiseDensity NoiseDensity::tabulated(const GridSpec& grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.points)
    throw GridMismatchError("tabulated values length does not match grid");
  double mass = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw NegativeWeightError("tabulated density values must be nonnegative");
    mass += v;
  }
  mass *= grid.spacing();
  if (mass <= 0.0) throw AllZeroMassError("tabulated density has zero mass");
  NoiseDensity d;
  d.kind_ = Kind::Tabulated;
  d.grid_lower_ = grid.lower;
  d.grid_upper_ = grid.upper;
  d.grid_points_ = grid.points;
  d.values_ = std::move(values);
  for (double& v : d.values_) v /= mass;
  d.cumulative_.resize(d.values_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.values_.size(); ++i) {
    acc += d.values_[i] * grid.spacing();
    d.cumulative_[i] = acc;
  }
  d.cumulative_.back() = 1.0;  // close the CDF against rounding
  return d;
}

double NoiseDensity::pdf(double x) const {
  switch (kind_) {
    case Kind::Laplace:
      return std::exp(-std::fabs(x) / scale_) / (2.0 * scale_);
    case Kind::PolynomialTail: {
      const double a = std::max(std::fabs(x), core_radius_);
      return tail_coeff_ * std::pow(1.0 + a, -exponent_);
    }
    case Kind::Tabulated: {
      const GridSpec g(grid_lower_, grid_upper_, grid_points_);
      return values_[static_cast<std::size_t>(g.nearest_index(x))];
    }
  }
  return 0.0;
}

double NoiseDensity::sample(SplitMix64& rng) const {
  const double u = rng.next_open01();
  switch (kind_) {
    case Kind::Laplace:
      // Standard Laplace inverse CDF, folded around the median.
      return u < 0.5 ? scale_ * std::log(2.0 * u) : -scale_ * std::log(2.0 * (1.0 - u));
    case Kind::PolynomialTail: {
      const double m = exponent_, M = core_radius_, c = tail_coeff_;
      const double v = std::fabs(u - 0.5);  // mass above the median, one side
      const double core_half_mass = c * M * std::pow(1.0 + M, -m);
      double y;
      if (v <= core_half_mass) {
        y = v * std::pow(1.0 + M, m) / c;
      } else {
        const double w = v - core_half_mass;
        const double t = std::pow(1.0 + M, 1.0 - m) - w * (m - 1.0) / c;
        y = std::pow(t, 1.0 / (1.0 - m)) - 1.0;
      }
      return u < 0.5 ? -y : y;
    }
    case Kind::Tabulated: {
      const GridSpec g(grid_lower_, grid_upper_, grid_points_);
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = static_cast<int>(it - cumulative_.begin());
      return g.coord(std::min(idx, g.points - 1));
    }
  }
  return 0.0;
}

double NoiseDensity::mean() const {
  switch (kind_) {
    case Kind::Laplace:
    case Kind::PolynomialTail:
      return 0.0;  // symmetric about the origin
    case Kind::Tabulated: {
      const GridSpec g(grid_lower_, grid_upper_, grid_points_);
      double acc = 0.0;
      for (int i = 0; i < g.points; ++i)
        acc += g.coord(i) * values_[static_cast<std::size_t>(i)] * g.spacing();
      return acc;
    }
  }
  return 0.0;
}

double NoiseDensity::exp_abs_moment(double eps) const {
  if (!(eps > 0.0)) throw ValidationError("exp_abs_moment requires eps > 0");
  switch (kind_) {
    case Kind::Laplace:
      // E exp(eps|X|) = 1/(1 - eps*scale) when eps*scale < 1, else divergent.
      return eps * scale_ < 1.0 ? 1.0 / (1.0 - eps * scale_) : kInf;
    case Kind::PolynomialTail:
      return kInf;
    case Kind::Tabulated: {
      const GridSpec g(grid_lower_, grid_upper_, grid_points_);
      double acc = 0.0;
      for (int i = 0; i < g.points; ++i)
        acc += std::exp(eps * std::fabs(g.coord(i))) *
               values_[static_cast<std::size_t>(i)] * g.spacing();
      return acc;
    }
  }
  return kInf;
}

bool NoiseDensity::strictly_positive() const {
  if (kind_ != Kind::Tabulated) return true;
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

double NoiseDensity::characteristic_width() const {
  switch (kind_) {
    case Kind::Laplace:
      return scale_;
    case Kind::PolynomialTail:
      return core_radius_ + 1.0;
    case Kind::Tabulated:
      return std::max(std::fabs(grid_lower_), std::fabs(grid_upper_));
  }
  return 1.0;
}

bool NoiseDensity::operator==(const NoiseDensity& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Laplace:
      return scale_ == other.scale_;
    case Kind::PolynomialTail:
      return exponent_ == other.exponent_ && core_radius_ == other.core_radius_;
    case Kind::Tabulated:
      return grid_lower_ == other.grid_lower_ && grid_upper_ == other.grid_upper_ &&
             grid_points_ == other.grid_points_ && values_ == other.values_;
  }
  return false;
}

}  // namespace filterlab
