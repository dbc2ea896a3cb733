#include "filterlab/cli_dispatch.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "filterlab/config.hpp"
#include "filterlab/errors.hpp"
#include "filterlab/experiments.hpp"

namespace filterlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Temp-then-rename so a crashed run never leaves a half-written artifact
// under the final name.
void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("cannot write output file: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot move output into place: " + path);
  }
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const TruncationExcessError*>(&e)) return "TruncationExcess";
  if (dynamic_cast<const GridMismatchError*>(&e)) return "GridMismatch";
  if (dynamic_cast<const NegativeWeightError*>(&e)) return "NegativeWeight";
  if (dynamic_cast<const AllZeroMassError*>(&e)) return "AllZeroMass";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "Internal";
}

void append_hash_block(std::string& s, const std::string& block) {
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

int run_check(const ExperimentConfig& config, const std::string& out_path) {
  const ModelPair pair = build_models(config);
  const AssumptionReport report =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  std::string artifact;
  artifact += "# assumption check\n";
  artifact += report.certified() ? "# status = CERTIFIED\n" : "# status = UNCERTIFIED\n";
  append_hash_block(artifact, config.serialize());
  artifact += report.serialize();
  write_atomic(out_path, artifact);
  return report.certified() ? 0 : 2;
}

int run_stability(const ExperimentConfig& config, const std::string& out_path) {
  const StabilityReport report = stability_experiment(config);
  write_atomic(out_path, stability_csv(report, config));
  return report.certified ? 0 : 2;
}

int run_forgetting(const ExperimentConfig& config, const std::string& out_path,
                   std::ostream& diag) {
  const ForgettingReport report = forgetting_experiment(config);
  if (std::isinf(report.initial_birkhoff))
    diag << "warning kind=InfiniteBirkhoff msg=\"initial measures have "
            "mismatched supports; prefactor claim not quantitative\"\n";
  write_atomic(out_path, forgetting_csv(report, config));
  return report.certified ? 0 : 2;
}

int run_sweep(const ExperimentConfig& base, const std::string& out_path) {
  std::string index;
  index += "# sweep index\n";
  index += "# base_epsilon = " + fmt(base.perturbation_eps) + "\n";
  index += "factor,file,q,sup_mean_tv,certified\n";
  bool all_certified = true;
  for (int factor : {1, 2, 4}) {
    ExperimentConfig config = base;
    config.perturbation_eps = base.perturbation_eps * factor;
    const StabilityReport report = stability_experiment(config);
    const std::string file = out_path + ".q" + std::to_string(factor) + ".csv";
    write_atomic(file, stability_csv(report, config));
    index += std::to_string(factor) + "," + file + "," + fmt(report.assumptions.q) +
             "," + fmt(report.sup_mean_tv) + "," + (report.certified ? "1" : "0") +
             "\n";
    all_certified = all_certified && report.certified;
  }
  write_atomic(out_path, index);
  return all_certified ? 0 : 2;
}

int run_diagnose(const ExperimentConfig& config, const std::string& out_path) {
  const ModelPair pair = build_models(config);
  const AssumptionReport report =
      run_checks(pair.true_model, pair.wrong_model, config.radius, config.c);
  const GridMeasure mu0 = config.mu0.on_grid(config.grid);

  const TrajectorySample traj =
      sample_trajectory(pair.true_spec, config.horizon, config.seed);
  const FilterTrace trace = run_filter(pair.wrong_model, mu0, traj.observations,
                                       ModelTag::WrongModel);
  const std::vector<double> probes = per_step_birkhoff_probe(
      pair.true_model, pair.wrong_model, trace, traj.observations);

  const double bound = report.rho_prime < 1.0
                           ? certified_moment_ceiling(report, mu0)
                           : std::numeric_limits<double>::infinity();

  std::string main_csv;
  main_csv += "# diagnostic probes\n";
  main_csv +=
      report.certified() ? "# status = CERTIFIED\n" : "# status = UNCERTIFIED\n";
  append_hash_block(main_csv, config.serialize());
  append_hash_block(main_csv, report.serialize());
  main_csv += "# moment_bound = " + fmt(bound) + "\n";
  main_csv += "step,birkhoff_probe,exp_moment\n";
  for (std::size_t k = 0; k < probes.size(); ++k)
    main_csv += std::to_string(k + 1) + "," + fmt(probes[k]) + "," +
                fmt(exp_moment(trace.measures[k + 1], report.c)) + "\n";
  write_atomic(out_path, main_csv);

  // Short-horizon decomposition companion.
  const std::size_t n_tel =
      std::min<std::size_t>(traj.observations.size(), 20);
  const std::span<const double> window(traj.observations.data(), n_tel);
  const auto terms =
      telescoping_diagnostic(pair.true_model, pair.wrong_model, mu0, window);
  const GridMeasure wrong_end = trace.measures[n_tel];
  const GridMeasure exact_end = multi_step(pair.true_model, mu0, window);

  double sum_term_tv = 0.0;
  std::vector<double> term_tv(terms.size());
  std::vector<double> reconstruction(static_cast<std::size_t>(mu0.size()), 0.0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    double tv = 0.0;
    for (std::size_t i = 0; i < terms[k].size(); ++i) {
      tv += std::fabs(terms[k][i]);
      reconstruction[i] += terms[k][i];
    }
    term_tv[k] = tv;
    sum_term_tv += tv;
  }
  double reconstruction_err = 0.0;
  double final_diff_tv = 0.0;
  for (int i = 0; i < mu0.size(); ++i) {
    const double diff = wrong_end[i] - exact_end[i];
    reconstruction_err = std::max(
        reconstruction_err, std::fabs(reconstruction[static_cast<std::size_t>(i)] - diff));
    final_diff_tv += std::fabs(diff);
  }

  std::string tel_csv;
  tel_csv += "# telescoping decomposition\n";
  tel_csv += "# steps = " + std::to_string(n_tel) + "\n";
  tel_csv += "# reconstruction_error = " + fmt(reconstruction_err) + "\n";
  tel_csv += "# sum_term_tv = " + fmt(sum_term_tv) + "\n";
  tel_csv += "# final_diff_tv = " + fmt(final_diff_tv) + "\n";
  tel_csv += "step,term_tv\n";
  for (std::size_t k = 0; k < term_tv.size(); ++k)
    tel_csv += std::to_string(k + 1) + "," + fmt(term_tv[k]) + "\n";
  write_atomic(out_path + ".telescoping.csv", tel_csv);

  return report.certified() ? 0 : 2;
}

}  // namespace

int dispatch(const RunManifest& manifest, std::ostream& diag) {
  try {
    ExperimentConfig config = load_config_file(manifest.config_path);
    if (manifest.seed_override) config.seed = *manifest.seed_override;
    if (manifest.output_path.empty())
      throw ValidationError("output path must not be empty");

    switch (manifest.command) {
      case RunManifest::Command::Check:
        return run_check(config, manifest.output_path);
      case RunManifest::Command::Stability:
        return run_stability(config, manifest.output_path);
      case RunManifest::Command::Forgetting:
        return run_forgetting(config, manifest.output_path, diag);
      case RunManifest::Command::Sweep:
        return run_sweep(config, manifest.output_path);
      case RunManifest::Command::Diagnose:
        return run_diagnose(config, manifest.output_path);
    }
    throw ValidationError("unknown command");
  } catch (const std::exception& e) {
    diag << "error kind=" << error_kind(e) << " msg=\"" << e.what() << "\"\n";
    return 1;
  }
}

}  // namespace filterlab
