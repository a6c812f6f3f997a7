#pragma once

// Scalar diagnostics: conserved quantities, Sobolev norms, modified energies,
// space-time Lebesgue norms and the windowed X^{s,b} norm.
//
// Quadratic terms are evaluated on the spectral side (exact by Plancherel);
// the quartic term is summed on the 2x zero-padded grid, where it is exact for
// the trigonometric polynomial the coefficients define.

#include "wgnls/dynamics.hpp"
#include "wgnls/grid.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace wgnls {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

double mass(const SpectralField& f);
double mass(const SpatialField& f);
/// int |u|^4, exact on the padded grid.
double quartic_integral(const SpectralField& f);
/// int 1/2 |grad u|^2 + 1/4 |u|^4
double energy(const SpectralField& f);
double energy(const SpatialField& f);
/// Im int conj(u) grad u, one entry per axis.
std::vector<double> momentum(const SpectralField& f);
std::vector<double> momentum(const SpatialField& f);

/// || <xi>^s u_hat ||_2
double sobolev_norm(const SpectralField& f, double s);
double sobolev_norm(const SpatialField& f, double s);

/// E(Iu) and E(Du).
double modified_energy_I(const SpectralField& f, double N, double s);
double modified_energy_D(const SpectralField& f, double N);
/// int |grad Iu|^2 and int |grad Du|^2 alone.
double gradient_energy_I(const SpectralField& f, double N, double s);
double gradient_energy_D(const SpectralField& f, double N);

/// Spatial L^q norm of one snapshot; q may be `infinity`.
double lebesgue_norm(const SpatialField& f, double q);

/// (int_0^T ||u(t)||_{L^q}^p dt)^{1/p} by the composite trapezoid rule on the
/// recorded times, or the max over samples for p = infinity. Throws
/// Error{empty_trajectory}.
double spacetime_norm(const Trajectory& traj, double p, double q);

/// Smooth time cutoff on [t0, t1]: zero on the outer sixteenths, one on the
/// middle half, exp(-1/x) smooth steps in between. `flat` replaces it by the
/// indicator of the window (used only for degenerate checks).
struct WindowSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  bool flat = false;

  double chi(double t) const;
  double length() const { return t1 - t0; }
};

/// || <xi>^s <tau>^b V(xi, tau) ||_2 where V is the time DFT over the window of
/// chi(t) e^{it|xi|^2} u_hat(t, xi), the series zero-padded to 4x the window length. The window must
/// lie on the trajectory's uniform sampling grid (Error{window_not_covered});
/// Error{insufficient_sampling} when dt * max|xi|^2 > 0.5.
double xsb_norm(const Trajectory& traj, double s, const WindowSpec& window, double b = 0.6);

struct ModifiedEnergyParams {
  double N = 1.0;
  double s = 1.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::vector<double> momentum;
  double h1 = 0.0;
  double h2 = 0.0;
  std::optional<double> e_i;
  std::optional<double> e_d;
};

DiagnosticsRecord diagnostics(double t, const SpectralField& f,
                              std::optional<ModifiedEnergyParams> i_params = std::nullopt,
                              std::optional<double> d_frequency = std::nullopt);

}  // namespace wgnls
