#include "wgnls/dynamics.hpp"

#include "fft.hpp"
#include "wgnls/error.hpp"
#include "wgnls/multipliers.hpp"

#include <cmath>
#include <sstream>

namespace wgnls {
namespace {

void apply_nonlinear_phase(ComplexArray& values, double dt) {
  for (Eigen::Index p = 0; p < values.size(); ++p)
    values[p] *= std::polar(1.0, -std::norm(values[p]) * dt);
}

bool all_finite(const ComplexArray& a) {
  for (Eigen::Index p = 0; p < a.size(); ++p)
    if (!std::isfinite(a[p].real()) || !std::isfinite(a[p].imag())) return false;
  return true;
}

ComplexArray phase_array(const GridSpec& grid, double t) {
  const RealArray& k2 = grid.xi_norm_squared();
  ComplexArray out(grid.size());
  for (Eigen::Index p = 0; p < out.size(); ++p) out[p] = std::polar(1.0, -t * k2[p]);
  return out;
}

void require_dynamics_grid(const GridSpec& grid) {
  if (grid.dim() != 3)
    throw Error(ErrorCode::bad_dimension, "time evolution requires d = 3");
  for (int a = 0; a < 3; ++a)
    if (grid.modes(a) < 8)
      throw Error(ErrorCode::invalid_argument, "time evolution requires at least 8 modes per axis");
}

}  // namespace

SpectralField cubic_term(const SpectralField& f, bool dealias) {
  const GridSpec& grid = f.grid();
  if (!dealias) {
    SpatialField u = to_spatial(f);
    u.values() *= u.values().abs2();
    return to_spectral(u);
  }
  const SpectralPadding pad(grid, 2);
  ComplexArray work;
  pad.pad(f.coeffs(), work);
  pad.to_physical(work);
  work *= work.abs2();
  pad.to_frequency(work);
  ComplexArray out;
  pad.truncate(work, out);
  return SpectralField(grid, std::move(out));
}

SpatialField cubic_term(const SpatialField& f, bool dealias) {
  return to_spatial(cubic_term(to_spectral(f), dealias));
}

SpatialField nonlinear_step(const SpatialField& f, double dt) {
  ComplexArray values = f.values();
  apply_nonlinear_phase(values, dt);
  return SpatialField(f.grid(), std::move(values));
}

SpectralField strang_step(const SpectralField& f, double dt) {
  const SpectralField half = free_propagate(f, 0.5 * dt);
  return free_propagate(to_spectral(nonlinear_step(to_spatial(half), dt)), 0.5 * dt);
}

SpatialField strang_step(const SpatialField& f, double dt) {
  return to_spatial(strang_step(to_spectral(f), dt));
}

// ---------------------------------------------------------------------------

struct StrangStepper::Impl {
  GridSpec grid;
  double dt;
  bool dealias;
  ComplexArray half_phase;
  ComplexArray full_phase;
  std::unique_ptr<SpectralPadding> padding;
  ComplexArray work;

  Impl(GridSpec g, double step, bool pad)
      : grid(std::move(g)),
        dt(step),
        dealias(pad),
        half_phase(phase_array(grid, 0.5 * step)),
        full_phase(phase_array(grid, step)) {
    if (dealias) padding = std::make_unique<SpectralPadding>(grid, 2);
  }

  void nonlinear(ComplexArray& coeffs) {
    if (dealias) {
      padding->pad(coeffs, work);
      padding->to_physical(work);
      apply_nonlinear_phase(work, dt);
      padding->to_frequency(work);
      padding->truncate(work, coeffs);
      return;
    }
    fft::backward(coeffs, grid.modes());
    coeffs *= grid.frequency_weight();
    apply_nonlinear_phase(coeffs, dt);
    fft::forward(coeffs, grid.modes());
    coeffs *= grid.cell_volume();
    const MaskArray& nyq = grid.nyquist_mask();
    for (Eigen::Index p = 0; p < coeffs.size(); ++p)
      if (nyq[p]) coeffs[p] = 0.0;
  }
};

StrangStepper::StrangStepper(GridSpec grid, double dt, bool dealias)
    : impl_(std::make_unique<Impl>(std::move(grid), dt, dealias)) {}
StrangStepper::~StrangStepper() = default;
StrangStepper::StrangStepper(StrangStepper&&) noexcept = default;
StrangStepper& StrangStepper::operator=(StrangStepper&&) noexcept = default;

void StrangStepper::advance(ComplexArray& coeffs, long n) {
  if (n <= 0) return;
  Impl& s = *impl_;
  coeffs *= s.half_phase;
  for (long k = 0; k < n; ++k) {
    s.nonlinear(coeffs);
    coeffs *= (k + 1 < n) ? s.full_phase : s.half_phase;
  }
}

// ---------------------------------------------------------------------------

long step_count(const EvolutionConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw Error(ErrorCode::invalid_argument, "dt and t_end must be positive");
  if (cfg.dt > cfg.t_end) throw Error(ErrorCode::invalid_argument, "dt must not exceed t_end");
  if (cfg.record_stride < 1) throw Error(ErrorCode::invalid_argument, "record_stride must be >= 1");
  const double ratio = cfg.t_end / cfg.dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw Error(ErrorCode::invalid_argument, "t_end must be an integer multiple of dt");
  if (n % cfg.record_stride != 0)
    throw Error(ErrorCode::invalid_argument, "step count must be a multiple of record_stride");
  return n;
}

void evolve(const SpectralField& u0, const EvolutionConfig& cfg, const SnapshotSink& sink) {
  const GridSpec& grid = u0.grid();
  require_dynamics_grid(grid);
  const long n = step_count(cfg);
  const bool monitor = grid.has_euclidean();

  auto check = [&](const SpectralField& u, double t) {
    if (!all_finite(u.coeffs())) {
      std::ostringstream msg;
      msg << "non-finite amplitude at t = " << t;
      throw Error(ErrorCode::non_finite, msg.str());
    }
    if (!monitor) return;
    const double frac = boundary_mass_fraction(to_spatial(u));
    if (frac > cfg.boundary_mass_threshold) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "boundary mass fraction " << frac << " exceeds " << cfg.boundary_mass_threshold
          << " at t = " << t;
      throw Error(ErrorCode::boundary_mass_exceeded, msg.str());
    }
  };

  StrangStepper stepper(grid, cfg.dt, cfg.dealias);
  SpectralField u = u0;
  u.zero_nyquist();
  check(u, 0.0);
  sink(0.0, u);
  for (long rec = 1; rec * cfg.record_stride <= n; ++rec) {
    stepper.advance(u.coeffs(), cfg.record_stride);
    const double t = static_cast<double>(rec * cfg.record_stride) * cfg.dt;
    check(u, t);
    sink(t, u);
  }
}

Trajectory evolve(const SpectralField& u0, const EvolutionConfig& cfg) {
  Trajectory traj(u0.grid());
  evolve(u0, cfg, [&](double t, const SpectralField& u) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  });
  return traj;
}

SpectralField rescale(const SpectralField& f, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  // Same mode index, xi -> xi / lambda; F(u^lambda)(xi) = lambda^{d-1} F(u)(lambda xi).
  const double factor = std::pow(lambda, f.grid().dim() - 1);
  return SpectralField(f.grid().rescaled(lambda), f.coeffs() * factor);
}

SpatialField rescale(const SpatialField& f, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  return SpatialField(f.grid().rescaled(lambda), f.values() / lambda);
}

double default_time_step(const GridSpec& grid) {
  const double top = grid.max_norm();
  return 0.1 / (top * top);
}

}  // namespace wgnls
