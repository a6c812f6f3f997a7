#include "wgnls/functionals.hpp"

#include "fft.hpp"
#include "wgnls/error.hpp"
#include "wgnls/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wgnls {
namespace {

double weighted_sum(const SpectralField& f, const RealArray& weight) {
  return f.grid().frequency_weight() * (weight * f.coeffs().abs2()).sum();
}

double gradient_term(const SpectralField& f) {
  return weighted_sum(f, f.grid().xi_norm_squared());
}

// exp(-1/x) smooth step from 0 (y <= 0) to 1 (y >= 1).
double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / y);
  const double b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

double japanese(double x2) { return std::sqrt(1.0 + x2); }

constexpr long time_padding = 4;

}  // namespace

double mass(const SpectralField& f) {
  return f.grid().frequency_weight() * f.coeffs().abs2().sum();
}

double mass(const SpatialField& f) { return f.grid().cell_volume() * f.values().abs2().sum(); }

double quartic_integral(const SpectralField& f) {
  const SpectralPadding pad(f.grid(), 2);
  ComplexArray work;
  pad.pad(f.coeffs(), work);
  pad.to_physical(work);
  return pad.padded_cell_volume() * work.abs2().square().sum();
}

double energy(const SpectralField& f) {
  return 0.5 * gradient_term(f) + 0.25 * quartic_integral(f);
}

double energy(const SpatialField& f) { return energy(to_spectral(f)); }

std::vector<double> momentum(const SpectralField& f) {
  std::vector<double> out;
  for (int a = 0; a < f.grid().dim(); ++a) out.push_back(weighted_sum(f, f.grid().xi(a)));
  return out;
}

std::vector<double> momentum(const SpatialField& f) { return momentum(to_spectral(f)); }

double sobolev_norm(const SpectralField& f, double s) {
  return std::sqrt(weighted_sum(f, (1.0 + f.grid().xi_norm_squared()).pow(s)));
}

double sobolev_norm(const SpatialField& f, double s) { return sobolev_norm(to_spectral(f), s); }

double gradient_energy_I(const SpectralField& f, double N, double s) {
  return gradient_term(apply_I(f, N, s));
}

double gradient_energy_D(const SpectralField& f, double N) {
  return gradient_term(apply_D(f, N));
}

double modified_energy_I(const SpectralField& f, double N, double s) {
  return energy(apply_I(f, N, s));
}

double modified_energy_D(const SpectralField& f, double N) { return energy(apply_D(f, N)); }

double lebesgue_norm(const SpatialField& f, double q) {
  if (!(q >= 1.0)) throw Error(ErrorCode::invalid_argument, "Lebesgue exponent must be >= 1");
  const RealArray modulus = f.values().abs();
  if (std::isinf(q)) return modulus.maxCoeff();
  return std::pow(f.grid().cell_volume() * modulus.pow(q).sum(), 1.0 / q);
}

double spacetime_norm(const Trajectory& traj, double p, double q) {
  if (traj.empty()) throw Error(ErrorCode::empty_trajectory, "trajectory has no snapshots");
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "time exponent must be >= 1");
  std::vector<double> norms;
  norms.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) norms.push_back(lebesgue_norm(to_spatial(snap), q));
  if (std::isinf(p)) return *std::max_element(norms.begin(), norms.end());
  if (norms.size() < 2)
    throw Error(ErrorCode::invalid_argument, "finite time exponent needs at least two samples");
  double integral = 0.0;
  for (std::size_t n = 0; n + 1 < norms.size(); ++n) {
    const double h = traj.times[n + 1] - traj.times[n];
    integral += 0.5 * h * (std::pow(norms[n], p) + std::pow(norms[n + 1], p));
  }
  return std::pow(integral, 1.0 / p);
}

double WindowSpec::chi(double t) const {
  if (t < t0 || t > t1) return 0.0;
  if (flat) return 1.0;
  const double x = (t - t0) / (t1 - t0);
  const double edge = std::min(x, 1.0 - x);
  return smooth_step((edge - 1.0 / 16.0) / (3.0 / 16.0));
}

double xsb_norm(const Trajectory& traj, double s, const WindowSpec& window, double b) {
  if (traj.empty()) throw Error(ErrorCode::empty_trajectory, "trajectory has no snapshots");
  if (!(window.t1 > window.t0)) throw Error(ErrorCode::invalid_argument, "window must have t1 > t0");
  const std::size_t count = traj.times.size();
  if (count < 2) throw Error(ErrorCode::window_not_covered, "trajectory has a single sample");
  const double dt = traj.sampling_interval();
  const double tol = 1e-9 * dt;
  const double first = traj.times.front();
  const double last = traj.times.back();
  if (window.t0 < first - tol || window.t1 > last + tol)
    throw Error(ErrorCode::window_not_covered, "window extends beyond the recorded times");
  const double start_pos = (window.t0 - first) / dt;
  const double span_pos = window.length() / dt;
  const long start = std::lround(start_pos);
  const long K = std::lround(span_pos);
  if (std::abs(start_pos - start) > 1e-6 || std::abs(span_pos - K) > 1e-6)
    throw Error(ErrorCode::window_not_covered, "window endpoints are not on the sampling grid");

  const GridSpec& grid = traj.grid;
  const double top = grid.max_norm();
  if (dt * top * top > 0.5)
    throw Error(ErrorCode::insufficient_sampling, "sampling interval too coarse: dt max|xi|^2 > 0.5");

  // The windowed series is zero-padded so the discrete tau sum resolves the
  // H^b(R) norm of the cutoff rather than its window-periodic version.
  const long padded = time_padding * K;
  const double padded_length = static_cast<double>(time_padding) * window.length();
  std::vector<double> chi(K);
  std::vector<double> tau_weight(padded);
  for (long n = 0; n < K; ++n) chi[n] = window.chi(traj.times[start + n]);
  for (long n = 0; n < padded; ++n) {
    const long j = n <= padded / 2 ? n : n - padded;
    const double tau = 2.0 * std::numbers::pi * static_cast<double>(j) / padded_length;
    tau_weight[n] = std::pow(1.0 + tau * tau, b);
  }

  const RealArray& k2 = grid.xi_norm_squared();
  const MaskArray& nyq = grid.nyquist_mask();
  const std::vector<int> extent{static_cast<int>(padded)};
  ComplexArray series(padded);
  double total = 0.0;
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (nyq[p]) continue;
    bool any = false;
    series.setZero();
    for (long n = 0; n < K; ++n) {
      const double t = traj.times[start + n];
      const Complex c = traj.snapshots[start + n].coeffs()[p];
      series[n] = chi[n] * c * std::polar(1.0, t * k2[p]);
      any = any || series[n] != Complex(0.0);
    }
    if (!any) continue;
    fft::forward(series, extent);
    double row = 0.0;
    for (long n = 0; n < padded; ++n) row += tau_weight[n] * std::norm(series[n]);
    total += std::pow(japanese(k2[p]), 2.0 * s) * row;
  }
  // V = dt * DFT; Plancherel weights w in space and 1/length in time.
  return std::sqrt(grid.frequency_weight() * dt * dt / padded_length * total);
}

DiagnosticsRecord diagnostics(double t, const SpectralField& f,
                              std::optional<ModifiedEnergyParams> i_params,
                              std::optional<double> d_frequency) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.mass = mass(f);
  rec.energy = energy(f);
  rec.momentum = momentum(f);
  rec.h1 = sobolev_norm(f, 1.0);
  rec.h2 = sobolev_norm(f, 2.0);
  if (i_params) rec.e_i = modified_energy_I(f, i_params->N, i_params->s);
  if (d_frequency) rec.e_d = modified_energy_D(f, *d_frequency);
  return rec;
}

}  // namespace wgnls
