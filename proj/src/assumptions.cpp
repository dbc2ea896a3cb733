#include "filterlab/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "filterlab/errors.hpp"
#include "filterlab/filter.hpp"

namespace filterlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_grid(const DiscreteModel& a, const DiscreteModel& b) {
  if (!(a.grid() == b.grid()))
    throw GridMismatchError("models live on different grids");
}

// Probes unioned with the observation values the grid can actually produce,
// deduplicated; the suprema must see at least those.
std::vector<double> with_mapped_values(std::span<const double> probes,
                                       const DiscreteModel& a,
                                       const DiscreteModel& b) {
  std::set<double> ys(probes.begin(), probes.end());
  for (double v : a.obs_map_at_nodes()) ys.insert(v);
  for (double v : b.obs_map_at_nodes()) ys.insert(v);
  return {ys.begin(), ys.end()};
}

// max over the pair set of a/b and b/a, skipping indices where both vanish;
// +inf when exactly one side vanishes.
struct TwoSidedMax {
  double forward = 0.0;
  double backward = 0.0;
  bool any = false;

  void feed(double a, double b) {
    if (a == 0.0 && b == 0.0) return;
    if (a == 0.0 || b == 0.0) {
      forward = backward = kInf;
      any = true;
      return;
    }
    forward = std::max(forward, a / b);
    backward = std::max(backward, b / a);
    any = true;
  }
};

}  // namespace

A1Result check_a1(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  std::span<const double> obs_probes) {
  require_same_grid(true_model, wrong_model);
  if (obs_probes.empty()) throw ValidationError("check_a1 needs a nonempty probe set");
  const int n = true_model.grid().points;

  // The ratio factors as (transition part) x (likelihood part); maximizing
  // each factor separately gives exactly the joint maximum.
  TwoSidedMax kernel;
  const double* q = true_model.transition_data();
  const double* p = wrong_model.transition_data();
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(n) * n; ++idx)
    kernel.feed(q[idx], p[idx]);

  TwoSidedMax lik;
  const auto ys = with_mapped_values(obs_probes, true_model, wrong_model);
  for (double y : ys)
    for (int i = 0; i < n; ++i)
      lik.feed(true_model.likelihood(i, y), wrong_model.likelihood(i, y));

  A1Result out;
  out.max_ratio = std::max(
      {kernel.forward * lik.forward, kernel.backward * lik.backward});
  if (!std::isfinite(out.max_ratio) || out.max_ratio > kRatioCeiling) {
    out.ok = false;
    out.q = kInf;
    return out;
  }
  out.ok = true;
  out.q = std::log(kernel.forward * lik.forward) +
          std::log(kernel.backward * lik.backward);
  // The two maxima multiply to >= 1, so q >= 0 up to rounding.
  out.q = std::max(out.q, 0.0);
  return out;
}

A2Result check_a2(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  double radius) {
  require_same_grid(true_model, wrong_model);
  const GridSpec& g = true_model.grid();
  if (!(radius > 0.0) ||
      radius > std::max(std::fabs(g.lower), std::fabs(g.upper)))
    throw ValidationError("a2 radius must be positive and within the grid");

  std::vector<int> inside;
  for (int i = 0; i < g.points; ++i)
    if (std::fabs(g.coord(i)) <= radius) inside.push_back(i);
  if (inside.empty())
    throw ValidationError("a2 radius captures no grid node");

  // Worst row ratio equals (column max)/(column min) over rows started in the
  // ball; columns restricted to the ball as well.
  double worst = 1.0;
  for (const DiscreteModel* m : {&true_model, &wrong_model}) {
    for (int j : inside) {
      double cmax = 0.0, cmin = kInf;
      for (int i : inside) {
        const double v = m->transition(i, j);
        cmax = std::max(cmax, v);
        cmin = std::min(cmin, v);
      }
      if (cmax == 0.0) continue;  // column dead inside the ball for every start
      if (cmin == 0.0) {
        worst = kInf;
        break;
      }
      worst = std::max(worst, cmax / cmin);
    }
    if (std::isinf(worst)) break;
  }

  A2Result out;
  out.c_r = worst;
  out.ok = std::isfinite(worst) && worst <= kRatioCeiling;
  out.flagged = !(worst <= 1e6);
  return out;
}

bool check_a3(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
              std::span<const double> obs_probes) {
  require_same_grid(true_model, wrong_model);
  const auto ys = with_mapped_values(obs_probes, true_model, wrong_model);
  const int n = true_model.grid().points;
  for (double y : ys)
    for (int i = 0; i < n; ++i)
      if (!(true_model.likelihood(i, y) > 0.0) ||
          !(wrong_model.likelihood(i, y) > 0.0))
        return false;
  return true;
}

A4Result check_a4(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  double c, double radius) {
  require_same_grid(true_model, wrong_model);
  if (!(c > 0.0)) throw ValidationError("a4 exponent c must be positive");
  const GridSpec& g = true_model.grid();
  if (!(radius > 0.0) ||
      radius > std::max(std::fabs(g.lower), std::fabs(g.upper)))
    throw ValidationError("a4 radius must be positive and within the grid");

  const auto n = static_cast<std::size_t>(g.points);
  std::vector<double> moment_weights(n);
  for (std::size_t j = 0; j < n; ++j)
    moment_weights[j] = std::exp(c * std::fabs(g.coord(static_cast<int>(j))));

  A4Result out;
  out.c = c;
  out.radius = radius;
  out.rho = 0.0;
  out.big_k = 0.0;
  bool outside_seen = false, inside_seen = false;
  for (const DiscreteModel* m : {&true_model, &wrong_model}) {
    const double* t = m->transition_data();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.coord(static_cast<int>(i));
      double row_moment = 0.0;
      const double* row = t + i * n;
      for (std::size_t j = 0; j < n; ++j) row_moment += row[j] * moment_weights[j];
      if (std::fabs(x) >= radius) {
        outside_seen = true;
        const double ratio = row_moment / moment_weights[i];
        if (ratio > out.rho) {
          out.rho = ratio;
          out.witness_x = x;
        }
      }
      if (std::fabs(x) <= radius) {
        inside_seen = true;
        out.big_k = std::max(out.big_k, row_moment);
      }
    }
  }
  if (!outside_seen || !inside_seen)
    throw ValidationError("a4 radius leaves no nodes on one side");
  out.ok = out.rho < 1.0;
  return out;
}

A4Result check_a4_scan(const DiscreteModel& true_model,
                       const DiscreteModel& wrong_model, double radius,
                       std::span<const double> candidates) {
  if (candidates.empty()) throw ValidationError("a4 scan needs candidates");
  std::vector<double> cs(candidates.begin(), candidates.end());
  std::sort(cs.begin(), cs.end(), std::greater<>());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());

  A4Result best_failure;
  best_failure.rho = kInf;
  for (double c : cs) {
    A4Result r = check_a4(true_model, wrong_model, c, radius);
    if (r.ok) return r;
    if (r.rho < best_failure.rho) best_failure = r;
  }
  return best_failure;
}

A4PrimeResult check_a4prime(const ModelSpec& true_spec, const ModelSpec& wrong_spec,
                            const GridSpec& grid, double required_margin) {
  if (!(required_margin > 0.0))
    throw ValidationError("a4' requires a positive margin");
  if (!true_spec.drift || !wrong_spec.drift)
    throw ValidationError("a4' needs drift functions on both specs");

  A4PrimeResult out;

  // Inward margin min(|x| - |x+b(x)|, |x| - |x+b~(x)|) per node; locate the
  // smallest radius beyond which it never drops under required_margin.
  const int n = grid.points;
  std::vector<double> radii(static_cast<std::size_t>(n));
  std::vector<double> margins(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = grid.coord(i);
    const double mb = std::fabs(x) - std::fabs(x + true_spec.drift(x));
    const double mw = std::fabs(x) - std::fabs(x + wrong_spec.drift(x));
    radii[static_cast<std::size_t>(i)] = std::fabs(x);
    margins[static_cast<std::size_t>(i)] = std::min(mb, mw);
  }
  // Scan thresholds from the outside in, one radius shell (x and -x) at a
  // time; stop before the shell where the margin first breaks.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return radii[static_cast<std::size_t>(a)] > radii[static_cast<std::size_t>(b)];
  });
  double worst_beyond = kInf;
  double threshold = kInf;
  for (std::size_t s = 0; s < order.size();) {
    const double r = radii[static_cast<std::size_t>(order[s])];
    const double tie = 1e-9 * std::max(1.0, r);
    double shell_margin = kInf;
    std::size_t e = s;
    while (e < order.size() && r - radii[static_cast<std::size_t>(order[e])] <= tie) {
      shell_margin = std::min(shell_margin, margins[static_cast<std::size_t>(order[e])]);
      ++e;
    }
    if (shell_margin < required_margin) break;
    worst_beyond = std::min(worst_beyond, shell_margin);
    threshold = r;
    s = e;
  }
  out.margin_ok = std::isfinite(threshold);
  if (out.margin_ok) {
    out.threshold = threshold;
    out.margin = worst_beyond;
  }

  // Compact part: both images stay bounded over the scanned nodes.
  double image_bound = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = grid.coord(i);
    image_bound = std::max({image_bound, std::fabs(x + true_spec.drift(x)),
                            std::fabs(x + wrong_spec.drift(x))});
  }
  out.bounded_image_ok = std::isfinite(image_bound);

  out.zero_mean_ok = std::fabs(true_spec.signal_noise.mean()) <= 1e-9 &&
                     std::fabs(wrong_spec.signal_noise.mean()) <= 1e-9;

  // A Laplace(s) noise has E exp(eps|X|) < inf iff eps < 1/s; probe with a
  // kind-appropriate eps, smallest width wins when the noises differ.
  double eps = 0.5;
  for (const NoiseDensity* nd : {&true_spec.signal_noise, &wrong_spec.signal_noise})
    if (nd->kind() == NoiseDensity::Kind::Laplace)
      eps = std::min(eps, 0.5 / nd->characteristic_width());
  out.exp_moment_eps = eps;
  out.exp_moment_ok = std::isfinite(true_spec.signal_noise.exp_abs_moment(eps)) &&
                      std::isfinite(wrong_spec.signal_noise.exp_abs_moment(eps));

  out.ok = out.margin_ok && out.bounded_image_ok && out.zero_mean_ok &&
           out.exp_moment_ok;
  return out;
}

namespace {

double likelihood_spread(const DiscreteModel& m, double y) {
  const int n = m.grid().points;
  double lmax = 0.0, lmin = kInf;
  for (int i = 0; i < n; ++i) {
    const double v = m.likelihood(i, y);
    lmax = std::max(lmax, v);
    lmin = std::min(lmin, v);
  }
  if (lmax == 0.0) return kInf;  // dead likelihood row: positivity is gone
  if (lmin == 0.0) return kInf;
  return lmax / lmin;
}

double delta_over(const DiscreteModel& a, const DiscreteModel& b,
                  const std::vector<double>& ys) {
  double worst = 1.0;
  for (double y : ys)
    worst = std::max({worst, likelihood_spread(a, y), likelihood_spread(b, y)});
  return worst - 1.0;
}

}  // namespace

A5Result check_a5(const DiscreteModel& true_model, const DiscreteModel& wrong_model,
                  std::span<const double> obs_probes, double rho) {
  require_same_grid(true_model, wrong_model);
  if (obs_probes.empty()) throw ValidationError("check_a5 needs a nonempty probe set");

  auto ys = with_mapped_values(obs_probes, true_model, wrong_model);
  double lo = ys.front(), hi = ys.back();

  A5Result out;
  out.rho_used = rho;
  out.delta = delta_over(true_model, wrong_model, ys);
  // Widen the range until the running max stops moving; the ratio stabilizes
  // in the tails for every supported noise family.
  for (int ext = 0; ext < 6; ++ext) {
    const double mid = 0.5 * (lo + hi);
    const double half = std::max(hi - mid, 1.0) * 2.0;
    lo = mid - half;
    hi = mid + half;
    const int extra_points = 161;
    std::vector<double> wider(ys);
    for (int k = 0; k < extra_points; ++k)
      wider.push_back(lo + (hi - lo) * k / (extra_points - 1));
    const double delta2 = delta_over(true_model, wrong_model, wider);
    out.extensions = ext + 1;
    const bool stable = std::isfinite(delta2) && delta2 - out.delta <= 1e-3;
    out.delta = std::max(out.delta, delta2);
    ys = std::move(wider);
    if (stable) break;
  }
  out.probe_lo = lo;
  out.probe_hi = hi;
  out.product_ok = std::isfinite(out.delta) && (1.0 + out.delta) * rho < 1.0;
  return out;
}

double conditional_moment_factor(const DiscreteModel& model, const GridMeasure& mu,
                                 double y, double c) {
  const double before = exp_moment(mu, c);
  const double after = exp_moment(filter_step(model, mu, y).posterior, c);
  return after / before;
}

std::string AssumptionReport::serialize() const {
  char buf[64];
  std::string s;
  auto add_flag = [&s](const char* k, bool v) {
    s += k;
    s += v ? " = 1\n" : " = 0\n";
  };
  auto add_num = [&s, &buf](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s += k;
    s += " = ";
    s += buf;
    s += '\n';
  };
  add_flag("certified", certified());
  add_flag("a1_ok", a1_ok);
  add_num("q", q);
  add_flag("a2_ok", a2_ok);
  add_flag("a2_flagged", a2_flagged);
  add_num("c_r", c_r);
  add_num("a2_radius", a2_radius);
  add_flag("a3_ok", a3_ok);
  add_flag("a4_ok", a4_ok);
  add_num("c", c);
  add_num("rho", rho);
  add_num("k", big_k);
  add_num("r", radius);
  add_num("delta", delta);
  add_num("rho_prime", rho_prime);
  add_num("k_prime", k_prime);
  add_flag("a5_product_ok", a5_product_ok);
  return s;
}

std::vector<double> default_obs_probes(const DiscreteModel& true_model,
                                       const DiscreteModel& wrong_model,
                                       int points) {
  if (points < 2) throw ValidationError("probe set needs at least 2 points");
  double lo = kInf, hi = -kInf;
  for (const DiscreteModel* m : {&true_model, &wrong_model})
    for (double v : m->obs_map_at_nodes()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double pad = 4.0 * std::max(true_model.obs_noise().characteristic_width(),
                                    wrong_model.obs_noise().characteristic_width());
  lo -= pad;
  hi += pad;
  std::vector<double> ys(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    ys[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
  return ys;
}

AssumptionReport run_checks(const DiscreteModel& true_model,
                            const DiscreteModel& wrong_model, double radius,
                            double extra_c) {
  const auto probes = default_obs_probes(true_model, wrong_model);

  AssumptionReport rep;
  const A1Result a1 = check_a1(true_model, wrong_model, probes);
  rep.a1_ok = a1.ok;
  rep.q = a1.q;

  const A2Result a2 = check_a2(true_model, wrong_model, radius);
  rep.a2_ok = a2.ok;
  rep.a2_flagged = a2.flagged;
  rep.c_r = a2.c_r;
  rep.a2_radius = radius;

  rep.a3_ok = check_a3(true_model, wrong_model, probes);

  std::vector<double> cs(std::begin(kDefaultCScan), std::end(kDefaultCScan));
  if (extra_c > 0.0) cs.push_back(extra_c);
  const A4Result a4 = check_a4_scan(true_model, wrong_model, radius, cs);
  rep.a4_ok = a4.ok;
  rep.c = a4.c;
  rep.rho = a4.rho;
  rep.big_k = a4.big_k;
  rep.radius = radius;

  const A5Result a5 = check_a5(true_model, wrong_model, probes, a4.rho);
  rep.delta = a5.delta;
  rep.rho_prime = rep.rho * (1.0 + rep.delta);
  rep.k_prime = rep.big_k * (1.0 + rep.delta);
  rep.a5_product_ok = a5.product_ok;
  return rep;
}

}  // namespace filterlab
