#pragma once

// Experiment orchestration behind the command-line front end.

#include "wgnls/config.hpp"
#include "wgnls/error.hpp"
#include "wgnls/io.hpp"

#include <string>

namespace wgnls {

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_validation = 2,
  exit_boundary_mass = 3,
  exit_non_finite = 4,
  exit_under_resolved = 5,
  exit_probe_failure = 6,
};

int exit_code_for(ErrorCode code) noexcept;

SpectralField initial_data(const RunConfig& cfg, const GridSpec& grid);

/// Runs the configured experiment into cfg.output and writes the manifest
/// last. On failure the partial outputs stay and no manifest exists.
RunManifest run(const RunConfig& cfg);

/// Exact schedule exponents as text, one "name = value" per line.
std::string format_schedule(const Schedule& s);

}  // namespace wgnls
