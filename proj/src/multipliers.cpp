#include "wgnls/multipliers.hpp"

#include "wgnls/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace wgnls {
namespace {

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double norm_of(std::span<const double> xi) {
  double s = 0.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

// Fraction of the way through the blend region (N, 2N), in log2 units.
double blend_t(double abs_xi, double N) { return std::log2(abs_xi / N); }

template <typename Fn>
SpectralField multiply_real(const SpectralField& f, Fn&& symbol_at) {
  ComplexArray out = f.coeffs();
  for (Eigen::Index p = 0; p < out.size(); ++p) out[p] *= symbol_at(p);
  return SpectralField(f.grid(), std::move(out));
}

template <typename Op>
SpatialField via_spectral(const SpatialField& f, Op&& op) {
  return to_spatial(op(to_spectral(f)));
}

double eta_at(const GridSpec& grid, Eigen::Index p, double N) {
  double out = 1.0;
  for (int a = 0; a < grid.dim() && out != 0.0; ++a) out *= eta1(grid.xi(a)[p] / N);
  return out;
}

}  // namespace

double eta1(double r) {
  const double x = std::abs(r);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double up = psi(2.0 - x);
  const double down = psi(x - 1.0);
  return up / (up + down);
}

double eta_product(std::span<const double> xi, double N) {
  double out = 1.0;
  for (double v : xi) out *= eta1(v / N);
  return out;
}

double i_symbol(double abs_xi, double N, double s) {
  if (abs_xi <= N) return 1.0;
  if (abs_xi >= 2.0 * N) return std::pow(N / abs_xi, 1.0 - s);
  const double t = blend_t(abs_xi, N);
  return std::exp(-(1.0 - s) * std::numbers::ln2 * (2.0 * t * t - t * t * t));
}

double i_symbol(std::span<const double> xi, double N, double s) {
  return i_symbol(norm_of(xi), N, s);
}

double d_symbol(double abs_xi, double N) {
  if (abs_xi <= N) return 1.0;
  if (abs_xi >= 2.0 * N) return abs_xi / N;
  const double t = blend_t(abs_xi, N);
  return std::exp(std::numbers::ln2 * (2.0 * t * t - t * t * t));
}

double d_symbol(std::span<const double> xi, double N) { return d_symbol(norm_of(xi), N); }

// ---------------------------------------------------------------------------

Symbol lp_leq_symbol(double N) {
  return {"P_leq", {{"N", N}},
          [N](std::span<const double> xi) { return Complex(eta_product(xi, N), 0.0); }, true};
}

Symbol lp_band_symbol(double N) {
  return {"P_band", {{"N", N}},
          [N](std::span<const double> xi) {
            return Complex(eta_product(xi, N) - eta_product(xi, N / 2.0), 0.0);
          },
          true};
}

Symbol i_operator_symbol(double N, double s) {
  return {"I", {{"N", N}, {"s", s}},
          [N, s](std::span<const double> xi) { return Complex(i_symbol(xi, N, s), 0.0); }, true};
}

Symbol d_operator_symbol(double N) {
  return {"D", {{"N", N}},
          [N](std::span<const double> xi) { return Complex(d_symbol(xi, N), 0.0); }, true};
}

Symbol propagator_symbol(double t) {
  return {"propagator", {{"t", t}},
          [t](std::span<const double> xi) {
            double k2 = 0.0;
            for (double v : xi) k2 += v * v;
            return std::polar(1.0, -t * k2);
          },
          false};
}

Symbol bessel_symbol(double s) {
  return {"bessel", {{"s", s}},
          [s](std::span<const double> xi) {
            double k2 = 0.0;
            for (double v : xi) k2 += v * v;
            return Complex(std::pow(1.0 + k2, 0.5 * s), 0.0);
          },
          true};
}

ComplexArray evaluate(const Symbol& symbol, const GridSpec& grid) {
  ComplexArray out(grid.size());
  std::vector<double> xi(grid.dim());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.xi(a)[p];
    out[p] = symbol.rule(xi);
  }
  return out;
}

SpectralField apply(const Symbol& symbol, const SpectralField& f) {
  return SpectralField(f.grid(), f.coeffs() * evaluate(symbol, f.grid()));
}

SpatialField apply(const Symbol& symbol, const SpatialField& f) {
  return via_spectral(f, [&](const SpectralField& F) { return apply(symbol, F); });
}

void write_symbol_table(const std::filesystem::path& path, const GridSpec& grid,
                        const Symbol& symbol) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  out.precision(17);
  out << "# symbol " << symbol.name;
  for (const auto& [key, value] : symbol.params) out << ' ' << key << '=' << value;
  out << "\n# grid " << grid.describe() << '\n';
  const ComplexArray values = evaluate(symbol, grid);
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const auto idx = grid.multi_index(p);
    for (int a = 0; a < grid.dim(); ++a) out << grid.signed_mode(a, idx[a]) << ' ';
    for (int a = 0; a < grid.dim(); ++a) out << grid.xi(a)[p] << ' ';
    out << values[p].real() << ' ' << values[p].imag() << '\n';
  }
}

// ---------------------------------------------------------------------------

SpectralField project_leq(const SpectralField& f, double N) {
  const GridSpec& grid = f.grid();
  return multiply_real(f, [&](Eigen::Index p) { return eta_at(grid, p, N); });
}

SpatialField project_leq(const SpatialField& f, double N) {
  return via_spectral(f, [N](const SpectralField& F) { return project_leq(F, N); });
}

SpectralField project_band(const SpectralField& f, double N) {
  const GridSpec& grid = f.grid();
  return multiply_real(
      f, [&](Eigen::Index p) { return eta_at(grid, p, N) - eta_at(grid, p, N / 2.0); });
}

SpatialField project_band(const SpatialField& f, double N) {
  return via_spectral(f, [N](const SpectralField& F) { return project_band(F, N); });
}

SpectralField apply_I(const SpectralField& f, double N, double s) {
  const RealArray& k = f.grid().xi_norm();
  return multiply_real(f, [&](Eigen::Index p) { return i_symbol(k[p], N, s); });
}

SpatialField apply_I(const SpatialField& f, double N, double s) {
  return via_spectral(f, [N, s](const SpectralField& F) { return apply_I(F, N, s); });
}

SpectralField apply_D(const SpectralField& f, double N) {
  const RealArray& k = f.grid().xi_norm();
  return multiply_real(f, [&](Eigen::Index p) { return d_symbol(k[p], N); });
}

SpatialField apply_D(const SpatialField& f, double N) {
  return via_spectral(f, [N](const SpectralField& F) { return apply_D(F, N); });
}

SpectralField free_propagate(const SpectralField& f, double t) {
  const RealArray& k2 = f.grid().xi_norm_squared();
  ComplexArray out = f.coeffs();
  for (Eigen::Index p = 0; p < out.size(); ++p) out[p] *= std::polar(1.0, -t * k2[p]);
  return SpectralField(f.grid(), std::move(out));
}

SpatialField free_propagate(const SpatialField& f, double t) {
  return via_spectral(f, [t](const SpectralField& F) { return free_propagate(F, t); });
}

SpectralField bessel_power(const SpectralField& f, double s) {
  const RealArray& k2 = f.grid().xi_norm_squared();
  return SpectralField(f.grid(), f.coeffs() * (1.0 + k2).pow(0.5 * s));
}

SpatialField bessel_power(const SpatialField& f, double s) {
  return via_spectral(f, [s](const SpectralField& F) { return bessel_power(F, s); });
}

std::vector<SpectralField> gradient(const SpectralField& f) {
  std::vector<SpectralField> out;
  out.reserve(f.grid().dim());
  for (int a = 0; a < f.grid().dim(); ++a) {
    out.emplace_back(f.grid(), f.coeffs() * (Complex(0.0, 1.0) * f.grid().xi(a)));
  }
  return out;
}

std::vector<SpatialField> gradient(const SpatialField& f) {
  std::vector<SpatialField> out;
  for (auto& component : gradient(to_spectral(f))) out.push_back(to_spatial(component));
  return out;
}

IBasicReport check_ibasic(const GridSpec& grid, double N, double s, double alpha) {
  if (!(N >= 1.0)) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  if (alpha < 1.0 - s) throw Error(ErrorCode::invalid_argument, "alpha must be >= 1 - s");
  const RealArray& k = grid.xi_norm();
  const auto& nyq = grid.nyquist_mask();
  IBasicReport report;
  bool any = false;
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (nyq[p] || k[p] < N) continue;
    any = true;
    const double ratio = std::pow(N, alpha) / (i_symbol(k[p], N, s) * std::pow(k[p], alpha));
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  if (!any) throw Error(ErrorCode::empty_range, "no lattice frequency with |xi| >= N");
  report.passed = report.max_ratio <= report.threshold;
  return report;
}

SandwichReport check_smoothing_sandwich(const GridSpec& grid, double N, double s) {
  const RealArray& k2 = grid.xi_norm_squared();
  const RealArray& k = grid.xi_norm();
  const auto& nyq = grid.nyquist_mask();
  SandwichReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (nyq[p]) continue;
    const double v = i_symbol(k[p], N, s) * std::pow(1.0 + k2[p], 0.5 * (1.0 - s));
    report.min_value = std::min(report.min_value, v);
    report.max_value = std::max(report.max_value, v);
  }
  report.upper_bound = 3.0 * std::pow(N, 1.0 - s);
  report.passed = report.min_value >= 1.0 && report.max_value <= report.upper_bound;
  return report;
}

}  // namespace wgnls
