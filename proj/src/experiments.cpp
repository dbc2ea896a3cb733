#include "filterlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "filterlab/errors.hpp"
#include "filterlab/stats.hpp"

namespace filterlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// The grid-wide initial has no grid-free sampler; trajectories draw X_0 from
// the continuous uniform over the grid hull instead.
InitialDistribution sampleable_initial(const InitialDistribution& init,
                                       const GridSpec& grid) {
  if (init.kind == InitialDistribution::Kind::GridUniform)
    return InitialDistribution::uniform(grid.lower, grid.upper);
  return init;
}

struct RunningMoments {
  std::vector<double> sum, sum_sq;

  explicit RunningMoments(int n)
      : sum(static_cast<std::size_t>(n), 0.0),
        sum_sq(static_cast<std::size_t>(n), 0.0) {}

  void feed(std::size_t k, double v) {
    sum[k] += v;
    sum_sq[k] += v * v;
  }

  void finalize(int replicas, std::vector<double>& mean,
                std::vector<double>& stderr_out) const {
    const double n = replicas;
    mean.resize(sum.size());
    stderr_out.resize(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
      mean[k] = sum[k] / n;
      double var = 0.0;
      if (replicas > 1)
        var = std::max(0.0, (sum_sq[k] - n * mean[k] * mean[k]) / (n - 1.0));
      stderr_out[k] = std::sqrt(var / n);
    }
  }
};

}  // namespace

void ExperimentConfig::validate() const {
  if (replicas < 1) throw ValidationError("replicas must be at least 1");
  if (horizon < 2) throw ValidationError("horizon must be at least 2");
  if (!(c > 0.0)) throw ValidationError("moment exponent c must be positive");
  if (!(radius > 0.0)) throw ValidationError("radius must be positive");
  if (!(perturbation_radius > 0.0))
    throw ValidationError("perturbation radius must be positive");
  if (!(perturbation_eps >= 0.0))
    throw ValidationError("perturbation size must be nonnegative");
  if (!(truncation_gate > 0.0))
    throw ValidationError("truncation gate must be positive");
}

std::string ExperimentConfig::serialize() const {
  std::string s;
  s += "preset = " + preset + "\n";
  s += "obs_gain = " + fmt(obs_gain) + "\n";
  s += "grid_lower = " + fmt(grid.lower) + "\n";
  s += "grid_upper = " + fmt(grid.upper) + "\n";
  s += "grid_points = " + std::to_string(grid.points) + "\n";
  s += "truncation_gate = " + fmt(truncation_gate) + "\n";
  s += "perturbation_eps = " + fmt(perturbation_eps) + "\n";
  s += "perturbation_radius = " + fmt(perturbation_radius) + "\n";
  s += "horizon = " + std::to_string(horizon) + "\n";
  s += "replicas = " + std::to_string(replicas) + "\n";
  s += "seed = " + std::to_string(seed) + "\n";
  s += "c = " + fmt(c) + "\n";
  s += "radius = " + fmt(radius) + "\n";
  s += "mu0 = " + mu0.describe() + "\n";
  if (nu0) s += "nu0 = " + nu0->describe() + "\n";
  return s;
}

ModelPair build_models(const ExperimentConfig& config) {
  config.validate();
  ModelSpec true_spec = make_preset(config.preset, config.obs_gain);
  true_spec.initial = sampleable_initial(config.mu0, config.grid);
  const PerturbationSpec pert = PerturbationSpec::drift_bump(
      config.perturbation_eps, config.perturbation_radius);
  ModelSpec wrong_spec = apply_perturbation(true_spec, pert);
  const DiscretizeOptions opts{config.truncation_gate};
  DiscreteModel true_model = discretize(true_spec, config.grid, opts);
  DiscreteModel wrong_model = discretize(wrong_spec, config.grid, opts);
  return {std::move(true_spec), std::move(wrong_spec), std::move(true_model),
          std::move(wrong_model)};
}

StabilityReport stability_experiment(const ExperimentConfig& config) {
  const ModelPair pair = build_models(config);

  StabilityReport out;
  out.assumptions =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  out.certified = out.assumptions.certified();
  out.replicas = config.replicas;
  out.horizon = config.horizon;

  const GridMeasure start = config.mu0.on_grid(config.grid);
  RunningMoments acc(config.horizon);
  for (int r = 0; r < config.replicas; ++r) {
    const TrajectorySample traj = sample_trajectory(
        pair.true_spec, config.horizon, config.seed + static_cast<std::uint64_t>(r));
    GridMeasure exact = start;
    GridMeasure wrong = start;
    for (int k = 0; k < config.horizon; ++k) {
      const double y = traj.observations[static_cast<std::size_t>(k)];
      exact = filter_step(pair.true_model, exact, y).posterior;
      wrong = filter_step(pair.wrong_model, wrong, y).posterior;
      acc.feed(static_cast<std::size_t>(k), tv_distance(exact, wrong));
    }
  }
  acc.finalize(config.replicas, out.mean_tv, out.stderr_tv);
  for (double m : out.mean_tv) out.sup_mean_tv = std::max(out.sup_mean_tv, m);
  return out;
}

ForgettingReport forgetting_experiment(const ExperimentConfig& config) {
  if (!config.nu0)
    throw ValidationError("forgetting experiment needs a second initial measure");
  const ModelPair pair = build_models(config);

  ForgettingReport out;
  // Both traces run the true model; the report certifies it against itself.
  out.assumptions =
      run_checks(pair.true_model, pair.true_model, config.radius, config.c);
  out.certified = out.assumptions.certified();
  out.replicas = config.replicas;
  out.horizon = config.horizon;

  const GridMeasure mu_start = config.mu0.on_grid(config.grid);
  const GridMeasure nu_start = config.nu0->on_grid(config.grid);
  out.initial_birkhoff = birkhoff_distance(mu_start, nu_start);

  RunningMoments acc(config.horizon);
  for (int r = 0; r < config.replicas; ++r) {
    const TrajectorySample traj = sample_trajectory(
        pair.true_spec, config.horizon, config.seed + static_cast<std::uint64_t>(r));
    GridMeasure from_mu = mu_start;
    GridMeasure from_nu = nu_start;
    for (int k = 0; k < config.horizon; ++k) {
      const double y = traj.observations[static_cast<std::size_t>(k)];
      from_mu = filter_step(pair.true_model, from_mu, y).posterior;
      from_nu = filter_step(pair.true_model, from_nu, y).posterior;
      acc.feed(static_cast<std::size_t>(k), tv_distance(from_mu, from_nu));
    }
  }
  acc.finalize(config.replicas, out.mean_tv, out.stderr_tv);

  // ln TV vs step over the informative window: above the numerical floor,
  // first five transient steps dropped.
  std::vector<double> xs, ys;
  int first = 0, last = 0;
  for (int k = 6; k <= config.horizon; ++k) {
    const double m = out.mean_tv[static_cast<std::size_t>(k - 1)];
    if (m > 1e-10) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(m));
      if (first == 0) first = k;
      last = k;
    }
  }
  if (xs.size() >= 5) {
    const LineFit fit = fit_line(xs, ys);
    out.alpha_defined = true;
    out.alpha_hat = -fit.slope;
    out.r_squared = fit.r_squared;
    out.fit_begin = first;
    out.fit_end = last + 1;
  }
  return out;
}

std::vector<std::vector<double>> telescoping_diagnostic(
    const DiscreteModel& true_model, const DiscreteModel& wrong_model,
    const GridMeasure& mu0, std::span<const double> observations) {
  const auto n = static_cast<int>(observations.size());
  if (n < 1) throw ValidationError("telescoping needs at least one observation");
  if (n > 30)
    throw ValidationError("telescoping is quadratic in the horizon; cap is 30");

  const FilterTrace wrong_trace =
      run_filter(wrong_model, mu0, observations, ModelTag::WrongModel);

  std::vector<std::vector<double>> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const GridMeasure& prev = wrong_trace.measures[static_cast<std::size_t>(k - 1)];
    const double y = observations[static_cast<std::size_t>(k - 1)];
    const auto tail = observations.subspan(static_cast<std::size_t>(k));
    // One substituted step, then the exact flow to the horizon.
    const GridMeasure substituted = multi_step(
        true_model, filter_step(wrong_model, prev, y).posterior, tail);
    const GridMeasure exact_from_prev = multi_step(
        true_model, filter_step(true_model, prev, y).posterior, tail);
    std::vector<double> term(static_cast<std::size_t>(mu0.size()));
    for (int i = 0; i < mu0.size(); ++i)
      term[static_cast<std::size_t>(i)] = substituted[i] - exact_from_prev[i];
    terms.push_back(std::move(term));
  }
  return terms;
}

std::vector<double> per_step_birkhoff_probe(const DiscreteModel& true_model,
                                            const DiscreteModel& wrong_model,
                                            const FilterTrace& trace,
                                            std::span<const double> observations) {
  if (trace.measures.size() != observations.size() + 1)
    throw ValidationError("trace length does not match the observation stream");
  std::vector<double> probes(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    const GridMeasure& prev = trace.measures[k];
    // Integrity: the trace must actually be the wrong filter on this stream.
    const GridMeasure replay =
        filter_step(wrong_model, prev, observations[k]).posterior;
    if (tv_distance(replay, trace.measures[k + 1]) > 1e-9)
      throw ValidationError("trace does not replay under the wrong model");
    const GridMeasure exact_step =
        filter_step(true_model, prev, observations[k]).posterior;
    probes[k] = birkhoff_distance(trace.measures[k + 1], exact_step);
  }
  return probes;
}

double moment_stability_probe(const FilterTrace& trace, double c) {
  double worst = 0.0;
  for (const GridMeasure& m : trace.measures)
    worst = std::max(worst, exp_moment(m, c));
  return worst;
}

double certified_moment_ceiling(const AssumptionReport& report, const GridMeasure& mu0) {
  if (!(report.rho_prime < 1.0))
    throw ValidationError("moment bound needs rho' < 1 (certified report)");
  return report.k_prime / (1.0 - report.rho_prime) + exp_moment(mu0, report.c);
}

namespace {

void append_metadata(std::string& s, const std::string& block) {
  std::size_t pos = 0;
  while (pos < block.size()) {
    std::size_t nl = block.find('\n', pos);
    if (nl == std::string::npos) nl = block.size();
    s += "# ";
    s.append(block, pos, nl - pos);
    s += '\n';
    pos = nl + 1;
  }
}

}  // namespace

std::string stability_csv(const StabilityReport& report,
                          const ExperimentConfig& config) {
  std::string s;
  s += "# stability report\n";
  s += report.certified ? "# status = CERTIFIED\n" : "# status = UNCERTIFIED\n";
  append_metadata(s, config.serialize());
  append_metadata(s, report.assumptions.serialize());
  s += "# sup_mean_tv = " + fmt(report.sup_mean_tv) + "\n";
  s += "step,mean_tv,stderr\n";
  for (std::size_t k = 0; k < report.mean_tv.size(); ++k)
    s += std::to_string(k + 1) + "," + fmt(report.mean_tv[k]) + "," +
         fmt(report.stderr_tv[k]) + "\n";
  return s;
}

std::string forgetting_csv(const ForgettingReport& report,
                           const ExperimentConfig& config) {
  std::string s;
  s += "# forgetting report\n";
  s += report.certified ? "# status = CERTIFIED\n" : "# status = UNCERTIFIED\n";
  append_metadata(s, config.serialize());
  append_metadata(s, report.assumptions.serialize());
  s += "# initial_birkhoff = " + fmt(report.initial_birkhoff) + "\n";
  s += "# alpha_defined = " + std::string(report.alpha_defined ? "1" : "0") + "\n";
  if (report.alpha_defined) {
    s += "# alpha_hat = " + fmt(report.alpha_hat) + "\n";
    s += "# r_squared = " + fmt(report.r_squared) + "\n";
    s += "# fit_begin = " + std::to_string(report.fit_begin) + "\n";
    s += "# fit_end = " + std::to_string(report.fit_end) + "\n";
  }
  s += "step,mean_tv,stderr\n";
  for (std::size_t k = 0; k < report.mean_tv.size(); ++k)
    s += std::to_string(k + 1) + "," + fmt(report.mean_tv[k]) + "," +
         fmt(report.stderr_tv[k]) + "\n";
  return s;
}

}  // namespace filterlab
