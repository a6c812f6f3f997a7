#pragma once

// Discretized product space R^n x T^{d-n}, its frequency lattice and the
// spectral transforms.
//
// Every direction is realized as a periodic direction of length `period`;
// truncated-Euclidean directions differ only in how diagnostics treat them.
// Lattice points are stored row-major (last axis fastest), in FFT order along
// every axis: signed mode m in (-M/2, M/2], frequency xi = 2 pi m / period.
//
// Normalization:
//   forward   F(xi) = h * sum_x f(x) e^{-i x.xi},      h = prod(period_i / M_i)
//   inverse   f(x)  = w * sum_xi F(xi) e^{+i x.xi},    w = prod(1 / period_i)
// so that h * sum |f|^2 == w * sum |F|^2 exactly. Nyquist coefficients
// (m = M/2 along any axis) are forced to zero on every spectral write.

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wgnls {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;
using MaskArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;

enum class DirectionKind { torus, euclidean_truncated };

struct Direction {
  DirectionKind kind = DirectionKind::torus;
  double period = 1.0;

  static Direction torus(double period) { return {DirectionKind::torus, period}; }
  static Direction euclidean(double box_length) {
    return {DirectionKind::euclidean_truncated, box_length};
  }

  bool operator==(const Direction&) const = default;
};

class GridSpec {
 public:
  /// Validating constructor; throws Error{odd_mode_count | non_positive_period
  /// | bad_dimension}.
  GridSpec(std::vector<Direction> directions, std::vector<int> modes);

  int dim() const;
  const std::vector<Direction>& directions() const;
  const Direction& direction(int axis) const;
  const std::vector<int>& modes() const;
  int modes(int axis) const;
  Eigen::Index size() const;

  double cell_volume() const;
  double frequency_weight() const;
  double volume() const;

  /// Frequencies along one axis in FFT order (the Nyquist slot holds +pi M/P).
  const RealArray& axis_frequencies(int axis) const;
  /// Frequency component along `axis` at every lattice point.
  const RealArray& xi(int axis) const;
  const RealArray& xi_norm_squared() const;
  const RealArray& xi_norm() const;
  /// 1 at lattice points that carry a Nyquist index along some axis.
  const MaskArray& nyquist_mask() const;

  /// Largest retained |xi| along one axis: 2 pi (M/2 - 1) / period.
  double max_frequency(int axis) const;
  /// Smallest of the per-axis maxima; the resolution limit "in any direction".
  double lattice_max() const;
  /// Largest retained Euclidean norm |xi| on the lattice.
  double max_norm() const;

  bool has_euclidean() const;
  int euclidean_count() const;

  /// Signed mode index of storage position `idx` along `axis`.
  int signed_mode(int axis, int idx) const;
  /// Flat index of a signed multi-index; modes are wrapped into FFT order.
  Eigen::Index flat_index(std::span<const int> signed_modes) const;
  std::vector<int> multi_index(Eigen::Index flat) const;
  /// Physical coordinate of storage position `idx` along `axis`, in [0, period).
  double coordinate(int axis, int idx) const;

  /// Same mode counts, every period multiplied by lambda.
  GridSpec rescaled(double lambda) const;

  /// One-line description used verbatim in output file headers.
  std::string describe() const;

  bool operator==(const GridSpec& other) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

GridSpec build_grid(int d, std::vector<Direction> directions, std::vector<int> modes);

class SpatialField {
 public:
  explicit SpatialField(GridSpec grid);
  SpatialField(GridSpec grid, ComplexArray values);

  const GridSpec& grid() const { return grid_; }
  const ComplexArray& values() const { return values_; }
  ComplexArray& values() { return values_; }

 private:
  GridSpec grid_;
  ComplexArray values_;
};

class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  /// Nyquist coefficients of `coeffs` are zeroed.
  SpectralField(GridSpec grid, ComplexArray coeffs);

  const GridSpec& grid() const { return grid_; }
  const ComplexArray& coeffs() const { return coeffs_; }
  /// Raw access; callers writing through it must call zero_nyquist().
  ComplexArray& coeffs() { return coeffs_; }
  void zero_nyquist();

 private:
  GridSpec grid_;
  ComplexArray coeffs_;
};

SpectralField to_spectral(const SpatialField& f);
SpatialField to_spatial(const SpectralField& F);

/// Discrete L2 norms under the fixed normalization (equal by Plancherel).
double l2_norm(const SpatialField& f);
double l2_norm(const SpectralField& F);
/// <f, g> = h * sum conj(f) g
Complex inner_product(const SpatialField& f, const SpatialField& g);
Complex inner_product(const SpectralField& f, const SpectralField& g);

/// Fraction of discrete mass lying in the outer shell of the box: points
/// whose coordinate along some truncated-Euclidean direction is farther than
/// 0.45 L from the box center L/2 (the outer 10% of each such direction).
/// Throws Error{no_euclidean_direction} on a pure torus.
double boundary_mass_fraction(const SpatialField& f);

/// Zero-padding of spectral coefficients onto a grid with `factor` times as
/// many modes per axis (same periods). Coefficient values are unchanged, so
/// transforms on the padded grid sample the same trigonometric polynomial.
class SpectralPadding {
 public:
  SpectralPadding(const GridSpec& grid, int factor);

  const std::vector<int>& padded_modes() const { return padded_modes_; }
  Eigen::Index padded_size() const { return padded_size_; }
  double padded_cell_volume() const { return padded_cell_volume_; }

  void pad(const ComplexArray& coeffs, ComplexArray& padded) const;
  /// Keeps the original lattice, discarding everything else; Nyquist slots stay zero.
  void truncate(const ComplexArray& padded, ComplexArray& coeffs) const;

  /// Padded coefficients -> padded physical samples (in place).
  void to_physical(ComplexArray& padded) const;
  /// Padded physical samples -> padded coefficients (in place).
  void to_frequency(ComplexArray& padded) const;

 private:
  std::vector<int> padded_modes_;
  Eigen::Index padded_size_ = 0;
  double padded_cell_volume_ = 0.0;
  double frequency_weight_ = 0.0;
  Eigen::Index source_size_ = 0;
  std::vector<Eigen::Index> source_index_;
  std::vector<Eigen::Index> target_index_;
};

}  // namespace wgnls
