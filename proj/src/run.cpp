#include "wgnls/run.hpp"

#include "wgnls/dynamics.hpp"
#include "wgnls/functionals.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace wgnls {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
    case ErrorCode::odd_mode_count:
    case ErrorCode::non_positive_period:
    case ErrorCode::bad_dimension:
    case ErrorCode::invalid_argument:
    case ErrorCode::sub_threshold:
    case ErrorCode::domain_error: return exit_validation;
    case ErrorCode::boundary_mass_exceeded: return exit_boundary_mass;
    case ErrorCode::non_finite: return exit_non_finite;
    case ErrorCode::under_resolved: return exit_under_resolved;
    case ErrorCode::io_error: return exit_internal;
    default: return exit_probe_failure;
  }
}

SpectralField initial_data(const RunConfig& cfg, const GridSpec& grid) {
  switch (cfg.recipe) {
    case Recipe::smooth: return smooth_random_data(grid, cfg.width, cfg.seed, cfg.mass);
    case Recipe::decaying_tail:
      return decaying_tail_data(grid, cfg.s ? cfg.s->value() : DriftExperimentSpec{}.s, cfg.k_max,
                                cfg.seed, cfg.mass);
    case Recipe::annulus: return random_annulus_data(grid, {cfg.shell, cfg.seed, 0});
    case Recipe::constant: return constant_data(grid, cfg.amplitude);
    case Recipe::plane_wave: return plane_wave_data(grid, cfg.amplitude, cfg.mode);
    case Recipe::gaussian_bump: return gaussian_bump_data(grid, cfg.amplitude, cfg.sigma);
  }
  throw Error(ErrorCode::invalid_argument, "unknown recipe");
}

std::string format_schedule(const Schedule& s) {
  std::ostringstream os;
  os << "s = " << s.s.str() << '\n'
     << "lambda_exponent = " << s.lambda_exponent.str() << '\n'
     << "t_exponent = " << s.t_exponent.str() << '\n'
     << "energy_exponent = " << (s.energy_exponent ? s.energy_exponent->str() : "none") << '\n'
     << "sub_threshold = " << (s.sub_threshold ? "true" : "false") << '\n'
     << "n = " << format_number(s.N) << '\n'
     << "lambda = " << format_number(s.lambda) << '\n'
     << "t = " << format_number(s.T) << '\n';
  return os.str();
}

namespace {

std::vector<std::string> run_conserve(const RunConfig& cfg, const GridSpec& grid, const fs::path& dir) {
  const SpectralField u0 = initial_data(cfg, grid);
  const double dt = effective_time_step(cfg);
  std::optional<ModifiedEnergyParams> i_params;
  std::optional<double> d_frequency;
  if (cfg.n) {
    d_frequency = *cfg.n;
    if (cfg.s) i_params = ModifiedEnergyParams{*cfg.n, cfg.s->value()};
  }
  std::vector<std::string> files{"diagnostics.csv"};
  CsvWriter csv(dir / "diagnostics.csv", grid.describe(),
                {"t", "mass", "energy", "px", "py", "pz", "h1", "h2", "e_i", "e_d"});
  std::unique_ptr<SnapshotWriter> snaps;
  if (cfg.snapshots) {
    snaps = std::make_unique<SnapshotWriter>(dir / "snapshots.bin", grid, dt, cfg.stride);
    files.push_back("snapshots.bin");
  }
  const double nan = std::nan("");
  std::optional<DiagnosticsRecord> first, last;
  double mass_drift = 0.0, energy_drift = 0.0, momentum_drift = 0.0;
  evolve(u0, {dt, cfg.t_end, cfg.stride, cfg.dealias, cfg.boundary_threshold},
         [&](double t, const SpectralField& u) {
           const DiagnosticsRecord r = diagnostics(t, u, i_params, d_frequency);
           csv.row({r.t, r.mass, r.energy, r.momentum[0], r.momentum[1], r.momentum[2], r.h1, r.h2,
                    r.e_i.value_or(nan), r.e_d.value_or(nan)});
           if (snaps) snaps->write(t, u);
           if (!first) first = r;
           mass_drift = std::max(mass_drift, std::abs(r.mass - first->mass));
           energy_drift = std::max(energy_drift, std::abs(r.energy - first->energy));
           for (int a = 0; a < 3; ++a)
             momentum_drift = std::max(momentum_drift, std::abs(r.momentum[a] - first->momentum[a]));
           last = r;
         });
  csv.close();
  if (snaps) snaps->close();

  ProbeReport report;
  report.experiment = "conserve";
  report.grid = grid.describe();
  report.seed = cfg.seed;
  report.parameters = {{"dt", dt}, {"t_end", cfg.t_end}, {"record_stride", cfg.stride},
                       {"dealias", cfg.dealias ? 1.0 : 0.0}};
  report.summary = {{"mass_drift_relative", mass_drift / first->mass},
                    {"energy_drift_relative", energy_drift / std::abs(first->energy)},
                    {"momentum_drift_relative", momentum_drift / first->mass}};
  write_report_json(dir / "report.json", report);
  files.push_back("report.json");
  return files;
}

std::vector<std::string> run_probe(const RunConfig& cfg, const GridSpec& grid, const fs::path& dir) {
  ProbeReport report;
  std::string csv_name;
  std::vector<std::string> columns;
  switch (cfg.experiment) {
    case Experiment::bilinear: {
      BilinearProbeSpec spec;
      spec.N2 = cfg.n2;
      spec.T = cfg.probe_time;
      spec.trials = cfg.trials;
      spec.seed = cfg.seed;
      spec.dt = cfg.dt;
      report = bilinear_sweep(grid, cfg.n_list, spec);
      csv_name = "bilinear.csv";
      columns = {"d",     "lambda", "n1",       "n2",           "trial",
                 "ratio", "bound_d3", "bound_n2sqrt", "ratio_over_d3", "ratio_over_n2sqrt"};
      break;
    }
    case Experiment::strichartz: {
      StrichartzProbeSpec spec;
      spec.N_list = cfg.n_list;
      spec.T = cfg.probe_time;
      spec.trials = cfg.trials;
      spec.seed = cfg.seed;
      spec.dt = cfg.dt;
      report = strichartz_probe(grid, spec);
      csv_name = "strichartz.csv";
      columns = {"n", "trial", "l10_3", "l30_7", "l15_2"};
      break;
    }
    case Experiment::almost_i:
    case Experiment::almost_d: {
      DriftExperimentSpec spec;
      spec.N_list = cfg.n_list;
      if (cfg.s) spec.s = cfg.s->value();
      spec.t_loc = cfg.t_end;
      spec.dt = effective_time_step(cfg);
      spec.record_stride = cfg.stride;
      spec.dealias = cfg.dealias;
      const SpectralField u0 = initial_data(cfg, grid);
      report = cfg.experiment == Experiment::almost_i ? almost_conservation_experiment(u0, spec)
                                                      : dmod_drift_experiment(u0, spec);
      csv_name = "drift.csv";
      columns = {"n", "s", "t_loc", "dt", "drift_sup"};
      break;
    }
    case Experiment::growth: {
      SpectralField u0 = initial_data(cfg, grid);
      if (cfg.a) u0.coeffs() *= *cfg.a / sobolev_norm(u0, 2.0);
      GrowthSpec spec;
      spec.t_end = cfg.t_end;
      spec.dt = effective_time_step(cfg);
      spec.record_stride = cfg.stride;
      spec.delta = cfg.delta;
      spec.dealias = cfg.dealias;
      report = sobolev_growth_experiment(u0, spec);
      csv_name = "growth.csv";
      columns = {"t", "h1", "h2", "envelope_ratio"};
      break;
    }
    case Experiment::scaling: {
      const SpectralField u0 = initial_data(cfg, grid);
      const double dt = effective_time_step(cfg);
      const double err = scaling_check(u0, cfg.lambda, cfg.t_end, dt, cfg.dealias);
      report.experiment = "scaling";
      report.grid = grid.describe();
      report.columns = {"lambda", "t", "dt", "rel_error"};
      report.rows = {{cfg.lambda, cfg.t_end, dt, err}};
      report.summary = {{"rel_error", err}};
      csv_name = "scaling.csv";
      columns = report.columns;
      break;
    }
    default: throw Error(ErrorCode::invalid_argument, "not a probe experiment");
  }
  report.seed = cfg.seed;
  write_report_csv(dir / csv_name, report, columns);
  write_report_json(dir / "report.json", report);
  return {csv_name, "report.json"};
}

std::vector<std::string> run_schedule(const RunConfig& cfg, const fs::path& dir) {
  std::vector<double> Ns = cfg.n_list;
  if (cfg.n) Ns.insert(Ns.begin(), *cfg.n);
  CsvWriter csv(dir / "schedule.csv", "none", {"s", "n", "lambda", "t_exp", "energy_exp"});
  for (double N : Ns) {
    const Schedule s = imethod_schedule_strict(*cfg.s, N);
    csv.row_text({s.s.str(), format_number(N), format_number(s.lambda), s.t_exponent.str(),
                  s.energy_exponent ? s.energy_exponent->str() : std::string()});
  }
  csv.close();
  return {"schedule.csv"};
}

}  // namespace

RunManifest run(const RunConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.version = WGNLS_VERSION;
  manifest.experiment = std::string(to_string(cfg.experiment));
  manifest.config = cfg.echo;

  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  fs::remove(dir / "manifest.json");

  std::vector<std::string> files;
  if (cfg.experiment == Experiment::schedule) {
    manifest.grid = "none";
    files = run_schedule(cfg, dir);
  } else {
    const GridSpec grid = cfg.grid();
    manifest.grid = grid.describe();
    files = cfg.experiment == Experiment::conserve ? run_conserve(cfg, grid, dir)
                                                   : run_probe(cfg, grid, dir);
  }
  manifest.grid_hash = sha256_hex_string(manifest.grid);
  manifest.finished = utc_timestamp();
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_manifest(dir, std::move(manifest), files);
}

}  // namespace wgnls
