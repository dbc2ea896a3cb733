#include "filterlab/model.hpp"

#include <cmath>
#include <utility>

#include "filterlab/errors.hpp"
#include "filterlab/kernels.hpp"

namespace filterlab {

InitialDistribution InitialDistribution::point(double x0) {
  return {Kind::PointMass, x0, 0.0};
}

InitialDistribution InitialDistribution::uniform(double a, double b) {
  if (!(a <= b)) throw ValidationError("uniform initial requires a <= b");
  return {Kind::Uniform, a, b};
}

InitialDistribution InitialDistribution::laplace(double scale, double center) {
  if (!(scale > 0.0)) throw ValidationError("laplace initial requires scale > 0");
  return {Kind::Laplace, scale, center};
}

InitialDistribution InitialDistribution::grid_wide() {
  return {Kind::GridUniform, 0.0, 0.0};
}

InitialDistribution InitialDistribution::from_descriptor(const std::string& text) {
  auto parse_args = [&text](std::size_t colon) {
    std::vector<double> args;
    std::size_t pos = colon + 1;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      const std::string piece = text.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        args.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } catch (const std::exception&) {
        throw ValidationError("bad number in initial descriptor: " + text);
      }
      pos = comma + 1;
    }
    return args;
  };

  if (text == "grid-uniform") return grid_wide();
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("initial descriptor needs kind:args, got: " + text);
  const std::string kind = text.substr(0, colon);
  const std::vector<double> args = parse_args(colon);
  if (kind == "point" && args.size() == 1) return point(args[0]);
  if (kind == "uniform" && args.size() == 2) return uniform(args[0], args[1]);
  if (kind == "laplace" && args.size() == 1) return laplace(args[0]);
  if (kind == "laplace" && args.size() == 2) return laplace(args[0], args[1]);
  throw ValidationError("unknown initial descriptor: " + text);
}

std::string InitialDistribution::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::PointMass:
      std::snprintf(buf, sizeof buf, "point:%.17g", a);
      return buf;
    case Kind::Uniform:
      std::snprintf(buf, sizeof buf, "uniform:%.17g,%.17g", a, b);
      return buf;
    case Kind::Laplace:
      if (b == 0.0) {
        std::snprintf(buf, sizeof buf, "laplace:%.17g", a);
      } else {
        std::snprintf(buf, sizeof buf, "laplace:%.17g,%.17g", a, b);
      }
      return buf;
    case Kind::GridUniform:
      return "grid-uniform";
  }
  return "point:0";
}

double InitialDistribution::sample(SplitMix64& rng) const {
  switch (kind) {
    case Kind::PointMass:
      return a;
    case Kind::Uniform:
      return a + (b - a) * rng.next_open01();
    case Kind::Laplace: {
      const double u = rng.next_open01();
      const double z = u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
      return b + z;
    }
    case Kind::GridUniform:
      throw ValidationError("grid-uniform initial has no grid-free sampler");
  }
  return a;
}

GridMeasure InitialDistribution::on_grid(const GridSpec& grid) const {
  switch (kind) {
    case Kind::PointMass:
      return point_mass(grid, a);
    case Kind::Uniform:
      return uniform_on(grid, a, b);
    case Kind::Laplace:
      return laplace_on(grid, a, b);
    case Kind::GridUniform:
      return grid_uniform(grid);
  }
  return point_mass(grid, a);
}

PerturbationSpec PerturbationSpec::none() {
  PerturbationSpec p;
  p.drift_delta = [](double) { return 0.0; };
  p.obs_delta = [](double) { return 0.0; };
  p.support_radius = 0.0;
  return p;
}

PerturbationSpec PerturbationSpec::drift_bump(double eps, double radius) {
  if (!(radius > 0.0)) throw ValidationError("perturbation radius must be positive");
  PerturbationSpec p;
  p.drift_delta = [eps, radius](double x) {
    return std::fabs(x) <= radius ? eps : 0.0;
  };
  p.obs_delta = [](double) { return 0.0; };
  p.support_radius = radius;
  return p;
}

ModelSpec apply_perturbation(const ModelSpec& spec, const PerturbationSpec& pert) {
  ModelSpec wrong = spec;
  const double radius = pert.support_radius;
  if (pert.drift_delta) {
    auto base = spec.drift;
    auto delta = pert.drift_delta;
    wrong.drift = [base, delta, radius](double x) {
      return std::fabs(x) <= radius ? base(x) + delta(x) : base(x);
    };
  }
  if (pert.obs_delta) {
    auto base = spec.obs_map;
    auto delta = pert.obs_delta;
    wrong.obs_map = [base, delta, radius](double x) {
      return std::fabs(x) <= radius ? base(x) + delta(x) : base(x);
    };
  }
  if (pert.signal_noise) wrong.signal_noise = *pert.signal_noise;
  if (pert.obs_noise) wrong.obs_noise = *pert.obs_noise;
  return wrong;
}

DiscreteModel::DiscreteModel(const GridSpec& grid,
                             std::vector<double> transition_row_major,
                             std::vector<double> obs_map_at_nodes,
                             NoiseDensity obs_noise)
    : grid_(grid),
      transition_(std::move(transition_row_major)),
      obs_map_(std::move(obs_map_at_nodes)),
      obs_noise_(std::move(obs_noise)),
      truncation_(static_cast<std::size_t>(grid.points), 0.0) {
  const auto n = static_cast<std::size_t>(grid_.points);
  if (transition_.size() != n * n)
    throw GridMismatchError("transition matrix size does not match grid");
  if (obs_map_.size() != n)
    throw GridMismatchError("observation map table does not match grid");
  for (std::size_t i = 0; i < n; ++i) {
    double* row = transition_.data() + i * n;
    for (std::size_t j = 0; j < n; ++j)
      if (!(row[j] >= 0.0) || !std::isfinite(row[j]))
        throw NegativeWeightError("transition entries must be nonnegative");
    const double mass = kernels::sum(row, n);
    if (mass <= 0.0) throw AllZeroMassError("transition row has zero mass");
    kernels::scale(row, 1.0 / mass, n);
  }
}

void DiscreteModel::likelihood_row(double y, std::span<double> out) const {
  if (out.size() != obs_map_.size())
    throw GridMismatchError("likelihood row buffer does not match grid");
  for (std::size_t i = 0; i < obs_map_.size(); ++i)
    out[i] = obs_noise_.pdf(y - obs_map_[i]);
}

DiscreteModel discretize(const ModelSpec& spec, const GridSpec& grid,
                         const DiscretizeOptions& opts) {
  if (!spec.drift || !spec.obs_map)
    throw ValidationError("model spec needs drift and observation map");
  const auto n = static_cast<std::size_t>(grid.points);
  std::vector<double> transition(n * n);
  std::vector<double> truncation(n, 0.0);
  const double dx = grid.spacing();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = grid.coord(static_cast<int>(i));
    const double center = xi + spec.drift(xi);
    double* row = transition.data() + i * n;
    for (std::size_t j = 0; j < n; ++j)
      row[j] = spec.signal_noise.pdf(grid.coord(static_cast<int>(j)) - center) * dx;
    const double mass = kernels::sum(row, n);
    const double lost = std::max(0.0, 1.0 - mass);
    if (lost > opts.max_row_truncation)
      throw TruncationExcessError(
          "transition row at x = " + std::to_string(xi) + " loses " +
          std::to_string(lost) + " mass past the grid hull (gate " +
          std::to_string(opts.max_row_truncation) + ")");
    truncation[i] = lost;
  }

  std::vector<double> obs_map(n);
  for (std::size_t i = 0; i < n; ++i)
    obs_map[i] = spec.obs_map(grid.coord(static_cast<int>(i)));

  DiscreteModel model(grid, std::move(transition), std::move(obs_map),
                      spec.obs_noise);
  model.truncation_ = std::move(truncation);
  return model;
}

TrajectorySample sample_trajectory(const ModelSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("trajectory length must be at least 1");
  if (!spec.drift || !spec.obs_map)
    throw ValidationError("model spec needs drift and observation map");
  TrajectorySample out;
  out.seed = seed;
  out.states.reserve(static_cast<std::size_t>(n) + 1);
  out.observations.reserve(static_cast<std::size_t>(n));
  SplitMix64 rng(seed);
  double x = spec.initial.sample(rng);
  out.states.push_back(x);
  for (int k = 0; k < n; ++k) {
    x = x + spec.drift(x) + spec.signal_noise.sample(rng);
    out.states.push_back(x);
    out.observations.push_back(spec.obs_map(x) + spec.obs_noise.sample(rng));
  }
  return out;
}

ModelSpec make_preset(const std::string& name, double obs_gain) {
  ModelSpec spec;
  spec.signal_noise = NoiseDensity::laplace(1.0);
  spec.obs_noise = NoiseDensity::laplace(1.0);
  spec.obs_map = [obs_gain](double x) { return obs_gain * std::tanh(x); };
  spec.initial = InitialDistribution::point(0.0);
  if (name == "laplace-contractive") {
    spec.drift = [](double x) {
      const double pull = 0.5 * std::min(std::fabs(x), 2.0);
      return x > 0.0 ? -pull : (x < 0.0 ? pull : 0.0);
    };
    return spec;
  }
  if (name == "laplace-linear") {
    spec.drift = [](double x) { return -0.5 * x; };
    return spec;
  }
  throw ValidationError("unknown model preset: " + name);
}

}  // namespace filterlab
