#pragma once

// Time evolution of i u_t + Laplacian u = |u|^2 u by Strang splitting with
// exact sub-flows: the linear flow is diagonal in frequency, the nonlinear
// flow u -> u exp(-i |u|^2 dt) is diagonal in space.

#include "wgnls/grid.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace wgnls {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_stride = 1;
  /// Evaluate the nonlinear sub-flow on the 2x zero-padded grid.
  bool dealias = true;
  double boundary_mass_threshold = 1e-6;
};

struct Trajectory {
  GridSpec grid;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;

  explicit Trajectory(GridSpec g) : grid(std::move(g)) {}
  bool empty() const { return snapshots.empty(); }
  double sampling_interval() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

using SnapshotSink = std::function<void(double t, const SpectralField& u)>;

/// Pointwise |f|^2 f. With `dealias`, evaluated on the 2x zero-padded grid and
/// truncated back, which is alias-free for a cubic product.
SpectralField cubic_term(const SpectralField& f, bool dealias = true);
SpatialField cubic_term(const SpatialField& f, bool dealias = true);

/// Exact flow of i u_t = |u|^2 u: u -> u exp(-i |u|^2 dt), pointwise.
SpatialField nonlinear_step(const SpatialField& f, double dt);

/// free_propagate(dt/2) . nonlinear_step(dt) . free_propagate(dt/2), with the
/// nonlinear sub-flow on the field's own lattice.
SpectralField strang_step(const SpectralField& f, double dt);
SpatialField strang_step(const SpatialField& f, double dt);

/// Reusable stepping workspace for a fixed (grid, dt, dealias). Consecutive
/// half linear steps are fused into one full-step phase.
class StrangStepper {
 public:
  StrangStepper(GridSpec grid, double dt, bool dealias);
  ~StrangStepper();
  StrangStepper(StrangStepper&&) noexcept;
  StrangStepper& operator=(StrangStepper&&) noexcept;

  /// Advances `coeffs` (spectral, Nyquist-free) by n steps in place.
  void advance(ComplexArray& coeffs, long n);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Repeated Strang steps from u0, streaming the snapshot at t = 0 and after
/// every `record_stride` steps to `sink`. Requires d = 3 and all M_i >= 8.
/// Throws Error{boundary_mass_exceeded} or Error{non_finite} from the
/// per-record checks.
void evolve(const SpectralField& u0, const EvolutionConfig& cfg, const SnapshotSink& sink);
Trajectory evolve(const SpectralField& u0, const EvolutionConfig& cfg);

/// Number of Strang steps for a config; validates t_end/dt and the stride.
long step_count(const EvolutionConfig& cfg);

/// u^lambda(x) = lambda^{-1} u(x / lambda) on the grid with every period
/// multiplied by lambda (same mode counts).
SpectralField rescale(const SpectralField& f, double lambda);
SpatialField rescale(const SpatialField& f, double lambda);

/// Largest time step of the default rule: phase rotation of at most 0.1 rad
/// per step at the largest lattice |xi|.
double default_time_step(const GridSpec& grid);

}  // namespace wgnls
