// Acceptance battery: one line per criterion, [PASS]/[FAIL], exit 1 when
// anything fails. Checks stay on even in Release builds; tolerances are
// pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "filterlab/assumptions.hpp"
#include "filterlab/experiments.hpp"
#include "filterlab/filter.hpp"
#include "filterlab/measure.hpp"
#include "filterlab/model.hpp"
#include "filterlab/rng.hpp"
#include "filterlab/stats.hpp"
#include "oracles.hpp"

using namespace filterlab;

namespace {

struct Failure {
  std::string what;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

#define REQUIRE(cond, msg)                                                   \
  do {                                                                       \
    if (!(cond))                                                             \
      throw Failure{std::string(msg) + " (line " + std::to_string(__LINE__) + \
                    ")"};                                                    \
  } while (0)

DiscreteModel four_state_chain() {
  const GridSpec grid{-1.5, 1.5, 4};
  std::vector<double> rows = {
      0.70, 0.10, 0.10, 0.10,  //
      0.20, 0.50, 0.20, 0.10,  //
      0.05, 0.15, 0.60, 0.20,  //
      0.10, 0.20, 0.30, 0.40,
  };
  std::vector<double> h(4);
  for (int i = 0; i < 4; ++i) h[static_cast<std::size_t>(i)] = grid.coord(i);
  return DiscreteModel(grid, std::move(rows), std::move(h),
                       NoiseDensity::laplace(1.0));
}

ExperimentConfig reference_config() { return ExperimentConfig{}; }

// 1. Ten recursion steps against brute-force path enumeration.
void exactness() {
  const auto model = four_state_chain();
  const auto prior =
      GridMeasure::normalize(model.grid(), {0.4, 0.3, 0.2, 0.1}).measure;
  const std::vector<double> obs = {0.3, -1.2, 0.7,  0.05, 1.4,
                                   -0.6, 0.0, 2.1, -1.9,  0.8};
  const auto oracle = oracles::brute_force_path_sum(model, prior, obs);
  const auto trace = run_filter(model, prior, obs);
  const double tv =
      oracles::tv_reference(trace.measures.back().weights(), oracle.posterior);
  REQUIRE(tv <= 1e-12, "posterior TV vs enumeration = " + fmt(tv));
  const double evidence = std::exp(trace.total_log_evidence());
  const double rel = std::fabs(evidence - oracle.evidence) / oracle.evidence;
  REQUIRE(rel <= 1e-10, "evidence relative error = " + fmt(rel));
}

// 2. multi_step composes: splitting the window anywhere changes nothing.
void flow_property() {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int s = 2 + trial % 7;
    const GridSpec grid{-2.0, 2.0, s};
    std::vector<double> h(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) h[static_cast<std::size_t>(i)] = grid.coord(i);
    DiscreteModel model(grid, oracles::random_stochastic_matrix(s, rng),
                        std::move(h), NoiseDensity::laplace(1.0));
    const auto mu =
        GridMeasure::normalize(grid, oracles::random_weights(s, rng)).measure;

    const int n = 1 + trial % 6;
    std::vector<double> obs(static_cast<std::size_t>(n));
    for (double& y : obs) y = 4.0 * rng.next_open01() - 2.0;
    const std::span<const double> window(obs);
    const int split = trial % (n + 1);

    const auto whole = multi_step(model, mu, window);
    const auto head = multi_step(model, mu, window.subspan(0, static_cast<std::size_t>(split)));
    const auto composed =
        multi_step(model, head, window.subspan(static_cast<std::size_t>(split)));
    const double tv = tv_distance(whole, composed);
    REQUIRE(tv <= 1e-12,
            "composition TV = " + fmt(tv) + " at trial " + std::to_string(trial));

    const auto traced = run_filter(model, mu, window).measures.back();
    const double tv2 = tv_distance(whole, traced);
    REQUIRE(tv2 <= 1e-12, "trace/window TV = " + fmt(tv2));
  }
}

// 3. Substitution terms reconstruct the final difference and bound its TV.
void telescoping() {
  const auto config = reference_config();
  const auto pair = build_models(config);
  const auto mu0 = config.mu0.on_grid(config.grid);
  const auto traj = sample_trajectory(pair.true_spec, 20, 7);

  const auto terms = telescoping_diagnostic(pair.true_model, pair.wrong_model,
                                            mu0, traj.observations);
  REQUIRE(terms.size() == 20, "expected one term per step");

  const auto exact = multi_step(pair.true_model, mu0, traj.observations);
  const auto wrong = multi_step(pair.wrong_model, mu0, traj.observations);

  double worst = 0.0;
  double term_tv_sum = 0.0;
  for (int i = 0; i < exact.size(); ++i) {
    double acc = 0.0;
    for (const auto& term : terms) acc += term[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::fabs(acc - (wrong[i] - exact[i])));
  }
  for (const auto& term : terms) {
    double tv = 0.0;
    for (double v : term) tv += std::fabs(v);
    term_tv_sum += tv;
  }
  REQUIRE(worst <= 1e-10, "node-wise reconstruction error = " + fmt(worst));
  const double final_tv = tv_distance(wrong, exact);
  REQUIRE(term_tv_sum >= final_tv - 1e-12,
          "sum of term TVs " + fmt(term_tv_sum) + " < final TV " + fmt(final_tv));
}

// 4. Every realized one-step projective error stays within the certified q.
void per_step_error() {
  const auto config = reference_config();
  const auto pair = build_models(config);
  const auto report =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  REQUIRE(report.certified(), "reference pair must certify");
  const auto mu0 = config.mu0.on_grid(config.grid);

  for (int r = 0; r < 20; ++r) {
    const auto traj = sample_trajectory(pair.true_spec, 200, 1000 + static_cast<std::uint64_t>(r));
    const auto trace = run_filter(pair.wrong_model, mu0, traj.observations,
                                  ModelTag::WrongModel);
    const auto probes = per_step_birkhoff_probe(pair.true_model, pair.wrong_model,
                                                trace, traj.observations);
    REQUIRE(probes.size() == 200, "expected one probe per step");
    for (std::size_t k = 0; k < probes.size(); ++k)
      REQUIRE(probes[k] <= report.q + 1e-9,
              "probe " + fmt(probes[k]) + " > q " + fmt(report.q) + " at step " +
                  std::to_string(k + 1) + ", replica " + std::to_string(r));
  }
}

// 5. Mean TV plateaus (no late trend) and the plateau height tracks q.
void plateau_and_scaling() {
  auto config = reference_config();
  const auto base = stability_experiment(config);
  REQUIRE(base.certified, "reference run must certify");

  // steps 100..200 of a horizon-200 run
  const std::span<const double> tail =
      std::span<const double>(base.mean_tv).subspan(99);
  REQUIRE(tail.size() == 101, "plateau window size");
  const auto trend = mann_kendall(tail);
  REQUIRE(trend.z <= kTrendCritical95,
          "late-window trend z = " + fmt(trend.z));

  const double q1 = base.assumptions.q;
  const double sup1 = base.sup_mean_tv;
  REQUIRE(sup1 > 0.0, "plateau must be nontrivial");
  for (int factor : {2, 4}) {
    auto scaled = config;
    scaled.perturbation_eps = config.perturbation_eps * factor;
    const auto rep = stability_experiment(scaled);
    REQUIRE(rep.certified, "scaled run must certify");
    const double q_ratio = rep.assumptions.q / q1;
    const double sup_ratio = rep.sup_mean_tv / sup1;
    REQUIRE(sup_ratio >= 0.5 * q_ratio && sup_ratio <= 2.0 * q_ratio,
            "factor " + std::to_string(factor) + ": sup ratio " + fmt(sup_ratio) +
                " outside [0.5, 2] x q ratio " + fmt(q_ratio));
  }
}

// 6. Same model, two spread-out initials: the gap decays exponentially.
void forgetting_rate() {
  auto config = reference_config();
  config.replicas = 300;
  config.horizon = 100;
  config.mu0 = InitialDistribution::laplace(1.0);
  config.nu0 = InitialDistribution::grid_wide();
  const auto rep = forgetting_experiment(config);
  REQUIRE(rep.certified, "forgetting run must certify");
  REQUIRE(std::isfinite(rep.initial_birkhoff),
          "initials must start at finite projective distance");
  REQUIRE(rep.alpha_defined, "decay fit needs enough live points");
  REQUIRE(rep.alpha_hat > 0.0, "fitted rate = " + fmt(rep.alpha_hat));
  REQUIRE(rep.r_squared >= 0.8,
          "ln TV fit R^2 = " + fmt(rep.r_squared) + " over steps " +
              std::to_string(rep.fit_begin) + ".." + std::to_string(rep.fit_end));
}

// 7. Exponential moments stay under the certified ceiling, and the one-step
//    conditional growth obeys its inside/outside constants.
void moment_ceiling() {
  const auto config = reference_config();
  const auto pair = build_models(config);
  const auto report =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  REQUIRE(report.certified(), "reference pair must certify");
  const auto mu0 = config.mu0.on_grid(config.grid);
  const double ceiling = certified_moment_ceiling(report, mu0);

  for (int r = 0; r < 5; ++r) {
    const auto traj = sample_trajectory(pair.true_spec, 200, 300 + static_cast<std::uint64_t>(r));
    for (const auto* model : {&pair.true_model, &pair.wrong_model}) {
      const auto trace = run_filter(*model, mu0, traj.observations);
      const double probe = moment_stability_probe(trace, report.c);
      REQUIRE(probe <= ceiling,
              "trace moment " + fmt(probe) + " > ceiling " + fmt(ceiling));
    }
  }

  for (const auto* model : {&pair.true_model, &pair.wrong_model}) {
    for (double x : {6.0, 10.0, -8.0, 15.0, 20.0})
      for (double y : {0.0, 1.0, -1.0, 3.0}) {
        const double factor = conditional_moment_factor(
            *model, point_mass(config.grid, x), y, report.c);
        REQUIRE(factor <= report.rho_prime + 1e-9,
                "outside factor " + fmt(factor) + " at x=" + fmt(x));
      }
    for (double x : {0.0, 1.0, -2.0, 4.0})
      for (double y : {0.0, 1.0, -1.0, 3.0}) {
        const auto stepped = filter_step(*model, point_mass(config.grid, x), y);
        const double numerator = exp_moment(stepped.posterior, report.c);
        REQUIRE(numerator <= report.k_prime + 1e-9,
                "inside moment " + fmt(numerator) + " at x=" + fmt(x));
      }
  }
}

// 8. Checker fidelity: exact zero for identical models, the closed-form
//    likelihood-spread bound, and drift-margin certification implying a
//    certifying moment exponent.
void checker_fidelity() {
  const auto config = reference_config();
  const auto pair = build_models(config);

  const auto probes = default_obs_probes(pair.true_model, pair.true_model);
  const auto self = check_a1(pair.true_model, pair.true_model, probes);
  REQUIRE(self.ok, "identical models must pass");
  REQUIRE(self.q == 0.0, "identical-model q = " + fmt(self.q));

  // |obs_map| <= 0.05, so the spread constant is at most e^{2 * 0.05} - 1.
  const auto report =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  REQUIRE(report.delta <= std::expm1(0.1) + 1e-12,
          "delta = " + fmt(report.delta));

  for (const char* preset : {"laplace-contractive", "laplace-linear"}) {
    const auto spec = make_preset(preset, config.obs_gain);
    const auto wrong_spec = apply_perturbation(
        spec, PerturbationSpec::drift_bump(config.perturbation_eps,
                                           config.perturbation_radius));
    const auto margins = check_a4prime(spec, wrong_spec, config.grid, 0.5);
    REQUIRE(margins.ok, std::string(preset) + " must pass the drift-margin check");

    DiscretizeOptions opts;
    opts.max_row_truncation = config.truncation_gate;
    const auto tm = discretize(spec, config.grid, opts);
    const auto wm = discretize(wrong_spec, config.grid, opts);
    const auto scan = check_a4_scan(tm, wm, config.radius);
    REQUIRE(scan.ok, std::string(preset) +
                         ": no scanned exponent certifies, best rho = " +
                         fmt(scan.rho));
  }
}

struct Criterion {
  const char* label;
  void (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"exact filter matches path enumeration", exactness},
      {"filter flow composes across windows", flow_property},
      {"substitution terms reconstruct the final difference", telescoping},
      {"per-step projective error stays within q", per_step_error},
      {"error plateau is flat and scales with q", plateau_and_scaling},
      {"filters forget their initial law exponentially", forgetting_rate},
      {"moment ceiling holds uniformly along traces", moment_ceiling},
      {"checker constants match their closed forms", checker_fidelity},
  };

  int failures = 0;
  int index = 0;
  for (const auto& criterion : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.fn();
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = std::string("unexpected exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty()) {
      std::printf("[PASS] %d. %s (%.2f s)\n", index, criterion.label, seconds);
    } else {
      ++failures;
      std::printf("[FAIL] %d. %s: %s (%.2f s)\n", index, criterion.label,
                  error.c_str(), seconds);
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}
