#pragma once

// Frequency-diagonal operators: Littlewood-Paley cutoffs, the I- and
// D-multipliers, Bessel potentials, gradients and the free propagator.
//
// Every operator acts on a SpectralField by pointwise multiplication of its
// coefficients; SpatialField overloads round-trip through the transforms.

#include "wgnls/grid.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wgnls {

/// Smooth even cutoff: 1 on |r| <= 1, 0 on |r| >= 2. On 1 < |r| < 2 it is
/// psi(2-|r|) / (psi(2-|r|) + psi(|r|-1)) with psi(x) = exp(-1/x).
double eta1(double r);

/// Product cutoff eta^d(xi / N) = prod_i eta1(xi_i / N).
double eta_product(std::span<const double> xi, double N);

/// I-multiplier m(|xi|): 1 for |xi| <= N, (N/|xi|)^{1-s} for |xi| >= 2N.
/// In between, log m is the cubic Hermite interpolant in log(|xi|/N) that
/// matches both values and slopes: log m = -(1-s) ln2 (2t^2 - t^3),
/// t = log2(|xi|/N).
double i_symbol(double abs_xi, double N, double s);
double i_symbol(std::span<const double> xi, double N, double s);

/// D-multiplier: 1 for |xi| <= N, |xi|/N for |xi| >= 2N, log-cubic blend
/// log D = ln2 (2t^2 - t^3) in between.
double d_symbol(double abs_xi, double N);
double d_symbol(std::span<const double> xi, double N);

/// A named multiplier evaluated pointwise on the frequency lattice.
struct Symbol {
  std::string name;
  std::map<std::string, double> params;
  std::function<Complex(std::span<const double>)> rule;
  bool real_valued = false;
};

Symbol lp_leq_symbol(double N);
Symbol lp_band_symbol(double N);
Symbol i_operator_symbol(double N, double s);
Symbol d_operator_symbol(double N);
Symbol propagator_symbol(double t);
Symbol bessel_symbol(double s);

/// Symbol values at every lattice point (Nyquist points included).
ComplexArray evaluate(const Symbol& symbol, const GridSpec& grid);
SpectralField apply(const Symbol& symbol, const SpectralField& f);
SpatialField apply(const Symbol& symbol, const SpatialField& f);

/// One line per lattice point: signed mode indices, xi components, Re, Im.
void write_symbol_table(const std::filesystem::path& path, const GridSpec& grid,
                        const Symbol& symbol);

SpectralField project_leq(const SpectralField& f, double N);
SpatialField project_leq(const SpatialField& f, double N);
/// P_N = P_{<=N} - P_{<=N/2}.
SpectralField project_band(const SpectralField& f, double N);
SpatialField project_band(const SpatialField& f, double N);

SpectralField apply_I(const SpectralField& f, double N, double s);
SpatialField apply_I(const SpatialField& f, double N, double s);
SpectralField apply_D(const SpectralField& f, double N);
SpatialField apply_D(const SpatialField& f, double N);

/// Multiply by e^{-i t |xi|^2}.
SpectralField free_propagate(const SpectralField& f, double t);
SpatialField free_propagate(const SpatialField& f, double t);

/// Multiply by (1 + |xi|^2)^{s/2}.
SpectralField bessel_power(const SpectralField& f, double s);
SpatialField bessel_power(const SpatialField& f, double s);

/// Component j is i xi_j applied to f.
std::vector<SpectralField> gradient(const SpectralField& f);
std::vector<SpatialField> gradient(const SpatialField& f);

struct IBasicReport {
  double max_ratio = 0.0;
  double threshold = 4.0;
  bool passed = false;
};

/// max over lattice |xi| >= N of N^alpha / (m(|xi|) |xi|^alpha).
/// Throws Error{empty_range} when no lattice point has |xi| >= N.
IBasicReport check_ibasic(const GridSpec& grid, double N, double s, double alpha);

struct SandwichReport {
  double min_value = 0.0;  // min of m(|xi|) <xi>^{1-s}
  double max_value = 0.0;  // max of the same
  double upper_bound = 0.0;  // 3 N^{1-s}
  bool passed = false;
};

/// Exhaustive lattice check of 1 <= m(|xi|) <xi>^{1-s} <= 3 N^{1-s}.
SandwichReport check_smoothing_sandwich(const GridSpec& grid, double N, double s);

}  // namespace wgnls
