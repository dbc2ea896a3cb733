#pragma once

#include <span>
#include <string>
#include <vector>

#include "filterlab/measure.hpp"
#include "filterlab/model.hpp"

namespace filterlab {

// Checkers for the certification battery. Failures that the theory itself
// anticipates (unbounded ratios, missing recurrence) are reported in the
// result structs rather than thrown: an uncertified experiment still runs,
// it is just flagged.

// Ratio ceiling past which a constant is reported as unbounded; such a
// constant is useless downstream and signals a modeling error.
inline constexpr double kRatioCeiling = 1e12;

// Two-sided log-sup discrepancy between the models (transition and
// likelihood together). ok = false when some ratio exceeds kRatioCeiling or
// divides by zero; q is +infinity in that case.
struct A1Result {
  bool ok = false;
  double q = 0.0;
  double max_ratio = 0.0;  // largest single ratio encountered
};
A1Result check_a1(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  std::span<const double> obs_probes);

// Local mixing constant over the ball of radius R: worst ratio of transition
// rows started inside the ball, per target column. flagged marks a suspect
// (> 1e6) but still finite constant.
struct A2Result {
  bool ok = false;
  bool flagged = false;
  double c_r = 0.0;
};
A2Result check_a2(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  double radius);

// Strict positivity of both likelihoods over grid nodes x probes.
bool check_a3(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
              std::span<const double> obs_probes);

// Lyapunov drift constants: rho bounds the moment contraction outside the
// ball of radius R, K bounds the moment inside. ok iff rho < 1; witness_x is
// the node attaining rho.
struct A4Result {
  bool ok = false;
  double rho = 0.0;
  double big_k = 0.0;
  double c = 0.0;
  double radius = 0.0;
  double witness_x = 0.0;
};
A4Result check_a4(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  double c, double radius);

// Runs check_a4 over candidate exponents (descending) and returns the result
// for the largest certifying c; when none certifies, the attempt with the
// smallest rho is returned. Larger c is preferred because it gives stronger
// moment control downstream.
inline constexpr double kDefaultCScan[] = {0.5, 0.25, 0.1, 0.05, 0.01};
A4Result check_a4_scan(const DiscreteModel& true_model,
                       const DiscreteModel& wrong_model, double radius,
                       std::span<const double> candidates = kDefaultCScan);

// Drift-margin recurrence condition on the continuous specs: beyond a located
// threshold every grid point moves inward by at least required_margin under
// both drifts; plus bounded image on the compact part, zero-mean signal
// noise, and a finite exponential noise moment.
struct A4PrimeResult {
  bool ok = false;
  bool margin_ok = false;
  double threshold = 0.0;  // smallest |x| beyond which the margin holds
  double margin = 0.0;     // worst inward margin beyond the threshold
  bool bounded_image_ok = false;
  bool zero_mean_ok = false;
  bool exp_moment_ok = false;
  double exp_moment_eps = 0.0;
};
A4PrimeResult check_a4prime(const ModelSpec& true_spec, const ModelSpec& wrong_spec,
                            const GridSpec& grid, double required_margin);

// Observation influence: worst likelihood-row spread minus one, maximized
// over probes (adaptively widened until the running max stabilizes within
// 1e-3) and both models. product_ok gates the stability theorem.
struct A5Result {
  double delta = 0.0;
  bool product_ok = false;
  double rho_used = 0.0;
  double probe_lo = 0.0, probe_hi = 0.0;  // probe range after extension
  int extensions = 0;
};
A5Result check_a5(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  std::span<const double> obs_probes, double rho);

// Realized one-step conditional moment growth:
// exp_moment(filter_step(mu, y), c) / exp_moment(mu, c).
double conditional_moment_factor(const DiscreteModel& model, const GridMeasure& mu,
                                 double y, double c);

// Everything the theorems consume, assembled by run_checks below.
struct AssumptionReport {
  bool a1_ok = false;
  double q = 0.0;
  bool a2_ok = false;
  bool a2_flagged = false;
  double c_r = 0.0;
  double a2_radius = 0.0;
  bool a3_ok = false;
  bool a4_ok = false;
  double c = 0.0;
  double rho = 0.0;
  double big_k = 0.0;
  double radius = 0.0;
  double delta = 0.0;
  double rho_prime = 0.0;  // rho * (1 + delta)
  double k_prime = 0.0;    // K * (1 + delta)
  bool a5_product_ok = false;

  bool certified() const {
    return a1_ok && a2_ok && a3_ok && a4_ok && a5_product_ok;
  }

  // Flat `name = value` lines, embeddable in CSV headers.
  std::string serialize() const;
};

// Default probe set: observation values attained on the grid under both
// models, padded by four characteristic noise widths, `points` values.
std::vector<double> default_obs_probes(const DiscreteModel& true_model,
                                       const DiscreteModel& wrong_model,
                                       int points = 201);

// Full battery: A1, A2 at `radius`, A3, A4 scan (candidates plus `extra_c`),
// A5 with the scanned rho.
AssumptionReport run_checks(const DiscreteModel& true_model,
                            const DiscreteModel& wrong_model, double radius,
                            double extra_c);

}  // namespace filterlab
