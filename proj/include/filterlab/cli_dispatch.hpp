#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace filterlab {

// A fully resolved command-line invocation.
struct RunManifest {
  enum class Command { Check, Stability, Forgetting, Sweep, Diagnose };

  Command command = Command::Check;
  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed_override;
};

// Runs the command and writes its artifacts (atomically: temp file, then
// rename). Returns 0 on certified success, 2 when the run completed but the
// assumption battery did not certify, 1 on error. Errors and warnings go to
// `diag` as one-line records: `error kind=<Type> msg="..."`.
int dispatch(const RunManifest& manifest, std::ostream& diag);

}  // namespace filterlab
