#pragma once

// Run configuration: a flat text file of [section] headers and key = value
// lines. Parsing validates every precondition of the chosen experiment
// without building a lattice.

#include "wgnls/grid.hpp"
#include "wgnls/probes.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wgnls {

enum class Experiment { conserve, bilinear, strichartz, almost_i, almost_d, growth, schedule, scaling };

std::string_view to_string(Experiment e) noexcept;

enum class Recipe { smooth, decaying_tail, annulus, constant, plane_wave, gaussian_bump };

std::string_view to_string(Recipe r) noexcept;

struct RunConfig {
  Experiment experiment = Experiment::conserve;
  std::uint64_t seed = 0;
  /// Relative paths resolve against the config file's directory.
  std::filesystem::path output = "out";
  bool snapshots = false;

  // [grid]; empty for experiment = schedule
  int d = 3;
  std::vector<Direction> directions;
  std::vector<int> modes;

  // [physics]
  std::optional<Rational> s;
  std::optional<double> n;
  std::vector<double> n_list;
  double n2 = 4.0;
  double lambda = 2.0;
  double delta = 0.1;
  /// Target ||u0||_{H^2} for growth runs; absent keeps the recipe's scale.
  std::optional<double> a;

  // [numerics]
  double dt = 0.0;  // 0 selects the per-experiment default
  double t_end = 1.0;
  int stride = 1;
  bool dealias = true;
  double boundary_threshold = 1e-6;
  int trials = 8;
  double probe_time = 0.99;

  // [initial]
  Recipe recipe = Recipe::smooth;
  double width = 2.0;
  double amplitude = 1.0;
  double mass = 1.0;
  double k_max = 128.0;
  double sigma = 1.0;
  double shell = 4.0;
  std::vector<int> mode;

  /// Every key = value pair as written, in file order ("section.key", value).
  std::vector<std::pair<std::string, std::string>> echo;

  bool needs_grid() const { return experiment != Experiment::schedule; }
  GridSpec grid() const;
};

/// Throws Error{parse_error} (with line number) for malformed text and
/// unknown sections or keys, Error{validation_error} naming the violated
/// precondition, and Error{under_resolved} when the lattice cannot resolve
/// the requested frequencies.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Runs the semantic checks again; parse_config already calls this.
void validate(const RunConfig& cfg);

/// Effective evolution time step for the configured experiment.
double effective_time_step(const RunConfig& cfg);

}  // namespace wgnls
