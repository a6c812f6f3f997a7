#pragma once

// Experiment layer: frequency-localized random data, bilinear and linear
// Strichartz ratios, modified-energy drift sweeps, Sobolev growth, the
// I-method scaling schedule and the scaling-symmetry check.

#include "wgnls/fit.hpp"
#include "wgnls/functionals.hpp"
#include "wgnls/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wgnls {

// ---------------------------------------------------------------------------
// Initial data

struct AnnulusDataSpec {
  double N = 1.0;
  std::uint64_t seed = 0;
  /// Independent sub-stream, e.g. trial number and role.
  std::uint64_t stream = 0;
};

/// Independent complex Gaussian coefficients on N/2 < |xi| <= N, zero
/// elsewhere, normalized to unit L2 norm. Throws Error{empty_shell}.
SpectralField random_annulus_data(const GridSpec& grid, const AnnulusDataSpec& spec);

/// u == c.
SpectralField constant_data(const GridSpec& grid, Complex c);
/// a e^{i xi.x} at the lattice point with the given signed mode indices.
SpectralField plane_wave_data(const GridSpec& grid, Complex amplitude,
                              const std::vector<int>& signed_modes);
/// <xi>^{-(s + 3/2 + 0.01)} times a seeded random phase on |xi| <= k_max,
/// scaled to mass `mass`.
SpectralField decaying_tail_data(const GridSpec& grid, double s, double k_max,
                                 std::uint64_t seed, double mass = 1.0);
/// exp(-|xi|^2 / (2 width^2)) times a seeded random phase, scaled to mass `mass`.
SpectralField smooth_random_data(const GridSpec& grid, double width, std::uint64_t seed,
                                 double mass = 1.0);
/// amplitude * exp(-|x - c|^2 / (2 sigma^2)) over the truncated-Euclidean
/// directions (centered in the box), constant along torus directions.
SpectralField gaussian_bump_data(const GridSpec& grid, Complex amplitude, double sigma);

// ---------------------------------------------------------------------------
// Reports

struct NamedFit {
  std::string name;
  LineFit fit;
};

struct ProbeReport {
  std::string experiment;
  std::string grid;
  std::vector<std::pair<std::string, double>> parameters;
  /// Per-point measurements; NaN marks an absent optional value.
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<NamedFit> fits;
  /// Derived scalars: bound comparisons, flags (0/1), reference values.
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  double parameter(const std::string& name) const;
  double summary_value(const std::string& name) const;
  const LineFit& fit(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Concatenates rows of reports sharing one column layout.
ProbeReport merge_reports(const std::vector<ProbeReport>& parts, const std::string& experiment);

// ---------------------------------------------------------------------------
// Bilinear and linear Strichartz probes

/// N2^eps (1/lambda + N2/N1)^{1/2} for d = 2, N2^eps (lambda^{-1/2} + N2 N1^{-1/2})
/// for d = 3, N2^eps (N2^{d-3}/lambda + N2^{d-1}/N1)^{1/2} for d = 4.
double bilinear_bound(int d, double lambda, double N1, double N2, double eps = 0.0);

/// Torus period used as lambda in the bounds (smallest torus period; 1 when
/// every direction is Euclidean).
double torus_scale(const GridSpec& grid);

struct BilinearProbeSpec {
  double N1 = 8.0;
  double N2 = 4.0;
  double T = 0.99;
  int trials = 8;
  std::uint64_t seed = 0;
  /// Time step of the trapezoid rule; 0 selects Gauss-Legendre nodes fitted
  /// to the data, exact up to rounding.
  double dt = 0.0;
};

/// Columns: d, lambda, n1, n2, trial, ratio, bound_d3, bound_n2sqrt,
/// ratio_over_d3, ratio_over_n2sqrt. Throws Error{under_resolved} when the
/// lattice does not reach 2 N1 along some axis.
ProbeReport bilinear_probe(const GridSpec& grid, const BilinearProbeSpec& spec);

/// ||u v||_{L^2_{t,x}([0,T])} for free evolutions of u and v, trapezoid rule
/// in t with `samples` intervals. The spatial integral is exact: the product
/// is formed on a grid padded past the sum of both supports.
double bilinear_product_norm(const SpectralField& u, const SpectralField& v, double T,
                             long samples);
/// Same with Gauss-Legendre nodes in t, enough for the spread of |xi|^2 on
/// the supports, so the time integral is exact up to rounding as well.
double bilinear_product_norm(const SpectralField& u, const SpectralField& v, double T);

/// One bilinear_probe per N1 with shared N2, merged, plus sweep summaries:
/// max ratio / bound over all trials and the largest step-to-step growth of
/// the per-N1 mean of ratio / bound.
ProbeReport bilinear_sweep(const GridSpec& grid, const std::vector<double>& N1_list,
                           const BilinearProbeSpec& base);

struct StrichartzProbeSpec {
  std::vector<double> N_list{2.0, 4.0, 8.0};
  double T = 0.99;
  int trials = 2;
  std::uint64_t seed = 0;
  double dt = 0.0;
};

/// Columns: n, trial, l10_3, l30_7, l15_2 (norms of e^{it Lap} u over [0,T]
/// divided by ||u||_2), with slope fits of the per-N means.
ProbeReport strichartz_probe(const GridSpec& grid, const StrichartzProbeSpec& spec);

// ---------------------------------------------------------------------------
// Drift experiments

struct DriftExperimentSpec {
  std::vector<double> N_list{4.0, 8.0, 16.0, 32.0};
  double s = 0.85;
  double t_loc = 0.5;
  double dt = 1e-4;
  int record_stride = 100;
  bool dealias = false;
};

/// drift(N) = sup over recorded t of |E(Iu)(t) - E(Iu)(0)| for one evolution
/// of u0, with a log-log slope fit. Columns: n, s, t_loc, dt, drift_sup.
/// Throws Error{under_resolved} if some N exceeds a quarter of the lattice max.
ProbeReport almost_conservation_experiment(const SpectralField& u0, const DriftExperimentSpec& spec);

/// Same with E(Du) (spec.s unused, reported as absent), plus the surrogate
/// sum_M min(1, M/N) ||P_M D u||_{L^{10/3}_{t,x}} per N in column `surrogate`.
ProbeReport dmod_drift_experiment(const SpectralField& u0, const DriftExperimentSpec& spec);

/// The dyadic surrogate for one stored trajectory and one N; exposed for tests.
double dmod_surrogate(const Trajectory& traj, double N);

// ---------------------------------------------------------------------------
// Growth, schedule, scaling

struct GrowthSpec {
  double t_end = 50.0;
  double dt = 2e-3;
  int record_stride = 50;
  double delta = 0.1;
  bool dealias = true;
};

/// Columns: t, h1, h2, envelope_ratio, mass, energy with
/// envelope_ratio = ||u||_{H^2} / (A + (1+t)^{1+delta}), A = ||u0||_{H^2}.
/// Summary: a, sup_ratio, t_sup, sup_early (argmax within the first tenth),
/// and fit "h2_growth" of log ||u||_{H^2} against log(1+t) over t >= 1.
ProbeReport sobolev_growth_experiment(const SpectralField& u0, const GrowthSpec& spec);

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

Rational operator+(Rational a, Rational b);
Rational operator-(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
Rational operator/(Rational a, Rational b);
bool operator<(Rational a, Rational b);
bool operator<=(Rational a, Rational b);

/// Parses "p/q", an integer, or a terminating decimal such as 0.85.
Rational parse_rational(const std::string& text);

struct Schedule {
  Rational s;
  double N = 1.0;
  Rational lambda_exponent;  // 2(1-s)/(2s-1)
  Rational t_exponent;       // (6s-5)/(2s-1)
  std::optional<Rational> energy_exponent;  // 2(1-s)/(6s-5), only for s > 5/6
  double lambda = 1.0;       // N^{lambda_exponent}
  double T = 1.0;            // N^{t_exponent}
  bool sub_threshold = false;  // s <= 5/6: the T exponent is not positive
};

/// Exact schedule exponents. Throws Error{domain_error} for s <= 1/2 or s > 1.
Schedule imethod_schedule(const Rational& s, double N);
/// As above, but throws Error{sub_threshold} when s <= 5/6.
Schedule imethod_schedule_strict(const Rational& s, double N);

/// ||rescale(evolve(u0, t)) - evolve(rescale(u0), lambda^2 t)||_2 / ||u0||_2,
/// the second run stepping with lambda^2 dt.
double scaling_check(const SpectralField& u0, double lambda, double t, double dt,
                     bool dealias = true);

}  // namespace wgnls
