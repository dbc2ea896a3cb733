#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "filterlab/cli_dispatch.hpp"

int main(int argc, char** argv) {
  CLI::App app{"grid laboratory for filter robustness under model misspecification"};
  app.require_subcommand(1);

  struct {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
  } args;

  auto add_common = [&args](CLI::App* cmd) {
    cmd->add_option("--config", args.config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "output artifact path")->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
  };

  using Command = filterlab::RunManifest::Command;
  add_common(app.add_subcommand("check", "run the assumption battery"));
  add_common(app.add_subcommand("stability", "exact vs wrong filter gap"));
  add_common(app.add_subcommand("forgetting", "initial-condition forgetting rate"));
  add_common(app.add_subcommand("sweep", "stability across scaled perturbations"));
  add_common(app.add_subcommand("diagnose", "decomposition and per-step probes"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  filterlab::RunManifest manifest;
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "check") manifest.command = Command::Check;
  if (name == "stability") manifest.command = Command::Stability;
  if (name == "forgetting") manifest.command = Command::Forgetting;
  if (name == "sweep") manifest.command = Command::Sweep;
  if (name == "diagnose") manifest.command = Command::Diagnose;
  manifest.config_path = args.config;
  manifest.output_path = args.out;
  if (args.seed_set) manifest.seed_override = args.seed;

  return filterlab::dispatch(manifest, std::cerr);
}
