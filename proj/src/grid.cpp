#include "wgnls/grid.hpp"

#include "fft.hpp"
#include "wgnls/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wgnls {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::odd_mode_count: return "OddModeCount";
    case ErrorCode::non_positive_period: return "NonPositivePeriod";
    case ErrorCode::bad_dimension: return "BadDimension";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::no_euclidean_direction: return "NoEuclideanDirection";
    case ErrorCode::empty_range: return "EmptyRange";
    case ErrorCode::empty_shell: return "EmptyShell";
    case ErrorCode::empty_trajectory: return "EmptyTrajectory";
    case ErrorCode::window_not_covered: return "WindowNotCovered";
    case ErrorCode::insufficient_sampling: return "InsufficientSampling";
    case ErrorCode::under_resolved: return "UnderResolved";
    case ErrorCode::boundary_mass_exceeded: return "BoundaryMassExceeded";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::sub_threshold: return "SubThreshold";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

struct GridSpec::Data {
  std::vector<Direction> directions;
  std::vector<int> modes;
  Eigen::Index size = 1;
  double cell_volume = 1.0;
  double frequency_weight = 1.0;
  double volume = 1.0;
  std::vector<RealArray> axis_frequencies;
  std::vector<RealArray> xi;
  RealArray xi2;
  RealArray xi_abs;
  MaskArray nyquist;
  double max_norm = 0.0;
};

namespace {

void validate(const std::vector<Direction>& directions, const std::vector<int>& modes) {
  const auto d = directions.size();
  if (d < 2 || d > 4) {
    throw Error(ErrorCode::bad_dimension,
                "dimension must be 2, 3 or 4, got " + std::to_string(d));
  }
  if (modes.size() != d) {
    throw Error(ErrorCode::bad_dimension, "one mode count per direction is required");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(directions[i].period > 0.0) || !std::isfinite(directions[i].period)) {
      throw Error(ErrorCode::non_positive_period,
                  "direction " + std::to_string(i) + " has non-positive period");
    }
    if (modes[i] <= 0 || modes[i] % 2 != 0) {
      throw Error(ErrorCode::odd_mode_count, "direction " + std::to_string(i) +
                                                 " has mode count " +
                                                 std::to_string(modes[i]) +
                                                 "; an even positive count is required");
    }
  }
}

}  // namespace

GridSpec::GridSpec(std::vector<Direction> directions, std::vector<int> modes) {
  validate(directions, modes);
  auto data = std::make_shared<Data>();
  data->directions = std::move(directions);
  data->modes = std::move(modes);
  const int d = static_cast<int>(data->modes.size());

  for (int a = 0; a < d; ++a) {
    const double period = data->directions[a].period;
    const int m = data->modes[a];
    data->size *= m;
    data->cell_volume *= period / m;
    data->frequency_weight /= period;
    data->volume *= period;
    RealArray freq(m);
    for (int i = 0; i < m; ++i) {
      const int signed_m = i <= m / 2 ? i : i - m;
      freq[i] = 2.0 * std::numbers::pi * signed_m / period;
    }
    data->axis_frequencies.push_back(std::move(freq));
  }

  const Eigen::Index n = data->size;
  data->xi.assign(d, RealArray(n));
  data->xi2 = RealArray::Zero(n);
  data->nyquist = MaskArray::Zero(n);
  std::vector<int> idx(d, 0);
  for (Eigen::Index p = 0; p < n; ++p) {
    double norm2 = 0.0;
    bool nyq = false;
    for (int a = 0; a < d; ++a) {
      const double f = data->axis_frequencies[a][idx[a]];
      data->xi[a][p] = f;
      norm2 += f * f;
      nyq = nyq || (idx[a] == data->modes[a] / 2);
    }
    data->xi2[p] = norm2;
    data->nyquist[p] = nyq ? 1 : 0;
    if (!nyq) data->max_norm = std::max(data->max_norm, std::sqrt(norm2));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < data->modes[a]) break;
      idx[a] = 0;
    }
  }
  data->xi_abs = data->xi2.sqrt();
  data_ = std::move(data);
}

int GridSpec::dim() const { return static_cast<int>(data_->modes.size()); }
const std::vector<Direction>& GridSpec::directions() const { return data_->directions; }
const Direction& GridSpec::direction(int axis) const { return data_->directions.at(axis); }
const std::vector<int>& GridSpec::modes() const { return data_->modes; }
int GridSpec::modes(int axis) const { return data_->modes.at(axis); }
Eigen::Index GridSpec::size() const { return data_->size; }
double GridSpec::cell_volume() const { return data_->cell_volume; }
double GridSpec::frequency_weight() const { return data_->frequency_weight; }
double GridSpec::volume() const { return data_->volume; }
const RealArray& GridSpec::axis_frequencies(int axis) const {
  return data_->axis_frequencies.at(axis);
}
const RealArray& GridSpec::xi(int axis) const { return data_->xi.at(axis); }
const RealArray& GridSpec::xi_norm_squared() const { return data_->xi2; }
const RealArray& GridSpec::xi_norm() const { return data_->xi_abs; }
const MaskArray& GridSpec::nyquist_mask() const { return data_->nyquist; }

double GridSpec::max_frequency(int axis) const {
  return 2.0 * std::numbers::pi * (modes(axis) / 2 - 1) / direction(axis).period;
}

double GridSpec::lattice_max() const {
  double out = max_frequency(0);
  for (int a = 1; a < dim(); ++a) out = std::min(out, max_frequency(a));
  return out;
}

double GridSpec::max_norm() const { return data_->max_norm; }

bool GridSpec::has_euclidean() const { return euclidean_count() > 0; }

int GridSpec::euclidean_count() const {
  int n = 0;
  for (const auto& dir : data_->directions)
    if (dir.kind == DirectionKind::euclidean_truncated) ++n;
  return n;
}

int GridSpec::signed_mode(int axis, int idx) const {
  const int m = modes(axis);
  return idx <= m / 2 ? idx : idx - m;
}

Eigen::Index GridSpec::flat_index(std::span<const int> signed_modes) const {
  if (static_cast<int>(signed_modes.size()) != dim()) {
    throw Error(ErrorCode::invalid_argument, "multi-index rank does not match grid");
  }
  Eigen::Index flat = 0;
  for (int a = 0; a < dim(); ++a) {
    const int m = modes(a);
    int idx = signed_modes[a] % m;
    if (idx < 0) idx += m;
    flat = flat * m + idx;
  }
  return flat;
}

std::vector<int> GridSpec::multi_index(Eigen::Index flat) const {
  std::vector<int> idx(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % modes(a));
    flat /= modes(a);
  }
  return idx;
}

double GridSpec::coordinate(int axis, int idx) const {
  return idx * direction(axis).period / modes(axis);
}

GridSpec GridSpec::rescaled(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  auto dirs = directions();
  for (auto& dir : dirs) dir.period *= lambda;
  return GridSpec(std::move(dirs), modes());
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << dim() << " directions=";
  for (int a = 0; a < dim(); ++a) {
    if (a) os << ',';
    os << (direction(a).kind == DirectionKind::torus ? "torus:" : "euclidean:")
       << direction(a).period;
  }
  os << " modes=";
  for (int a = 0; a < dim(); ++a) {
    if (a) os << ',';
    os << modes(a);
  }
  return os.str();
}

bool GridSpec::operator==(const GridSpec& other) const {
  return data_ == other.data_ ||
         (data_->directions == other.data_->directions && data_->modes == other.data_->modes);
}

GridSpec build_grid(int d, std::vector<Direction> directions, std::vector<int> modes) {
  if (d < 2 || d > 4) {
    throw Error(ErrorCode::bad_dimension, "dimension must be 2, 3 or 4, got " + std::to_string(d));
  }
  if (static_cast<int>(directions.size()) != d) {
    throw Error(ErrorCode::bad_dimension, "expected " + std::to_string(d) + " directions");
  }
  return GridSpec(std::move(directions), std::move(modes));
}

// ---------------------------------------------------------------------------

SpatialField::SpatialField(GridSpec grid)
    : grid_(std::move(grid)), values_(ComplexArray::Zero(grid_.size())) {}

SpatialField::SpatialField(GridSpec grid, ComplexArray values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::invalid_argument, "value count does not match grid size");
  }
}

SpectralField::SpectralField(GridSpec grid)
    : grid_(std::move(grid)), coeffs_(ComplexArray::Zero(grid_.size())) {}

SpectralField::SpectralField(GridSpec grid, ComplexArray coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw Error(ErrorCode::invalid_argument, "coefficient count does not match grid size");
  }
  zero_nyquist();
}

void SpectralField::zero_nyquist() {
  const auto& mask = grid_.nyquist_mask();
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
    if (mask[i]) coeffs_[i] = Complex(0.0, 0.0);
}

SpectralField to_spectral(const SpatialField& f) {
  ComplexArray data = f.values();
  fft::forward(data, f.grid().modes());
  data *= f.grid().cell_volume();
  return SpectralField(f.grid(), std::move(data));
}

SpatialField to_spatial(const SpectralField& F) {
  ComplexArray data = F.coeffs();
  fft::backward(data, F.grid().modes());
  data *= F.grid().frequency_weight();
  return SpatialField(F.grid(), std::move(data));
}

double l2_norm(const SpatialField& f) {
  return std::sqrt(f.grid().cell_volume() * f.values().abs2().sum());
}

double l2_norm(const SpectralField& F) {
  return std::sqrt(F.grid().frequency_weight() * F.coeffs().abs2().sum());
}

Complex inner_product(const SpatialField& f, const SpatialField& g) {
  return f.grid().cell_volume() * (f.values().conjugate() * g.values()).sum();
}

Complex inner_product(const SpectralField& f, const SpectralField& g) {
  return f.grid().frequency_weight() * (f.coeffs().conjugate() * g.coeffs()).sum();
}

double boundary_mass_fraction(const SpatialField& f) {
  const GridSpec& grid = f.grid();
  if (!grid.has_euclidean()) {
    throw Error(ErrorCode::no_euclidean_direction,
                "boundary mass is only defined with a truncated-Euclidean direction");
  }
  const int d = grid.dim();
  // Per-axis flag: is storage index i in the outer shell of that axis?
  std::vector<std::vector<std::uint8_t>> outer(d);
  for (int a = 0; a < d; ++a) {
    outer[a].assign(grid.modes(a), 0);
    if (grid.direction(a).kind != DirectionKind::euclidean_truncated) continue;
    const double length = grid.direction(a).period;
    for (int i = 0; i < grid.modes(a); ++i) {
      const double offset = std::abs(grid.coordinate(a, i) - 0.5 * length);
      outer[a][i] = offset > 0.45 * length ? 1 : 0;
    }
  }
  double total = 0.0;
  double shell = 0.0;
  std::vector<int> idx(d, 0);
  const auto& v = f.values();
  for (Eigen::Index p = 0; p < v.size(); ++p) {
    const double m = std::norm(v[p]);
    total += m;
    bool in_shell = false;
    for (int a = 0; a < d; ++a) in_shell = in_shell || outer[a][idx[a]];
    if (in_shell) shell += m;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.modes(a)) break;
      idx[a] = 0;
    }
  }
  return total > 0.0 ? shell / total : 0.0;
}

// ---------------------------------------------------------------------------

SpectralPadding::SpectralPadding(const GridSpec& grid, int factor) {
  if (factor < 1) throw Error(ErrorCode::invalid_argument, "padding factor must be >= 1");
  const int d = grid.dim();
  padded_size_ = 1;
  padded_cell_volume_ = 1.0;
  for (int a = 0; a < d; ++a) {
    padded_modes_.push_back(grid.modes(a) * factor);
    padded_size_ *= padded_modes_.back();
    padded_cell_volume_ *= grid.direction(a).period / padded_modes_.back();
  }
  frequency_weight_ = grid.frequency_weight();
  source_size_ = grid.size();

  const auto& mask = grid.nyquist_mask();
  source_index_.reserve(static_cast<std::size_t>(grid.size()));
  target_index_.reserve(static_cast<std::size_t>(grid.size()));
  std::vector<int> idx(d, 0);
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (!mask[p]) {
      Eigen::Index target = 0;
      for (int a = 0; a < d; ++a) {
        int m = grid.signed_mode(a, idx[a]);
        if (m < 0) m += padded_modes_[a];
        target = target * padded_modes_[a] + m;
      }
      source_index_.push_back(p);
      target_index_.push_back(target);
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.modes(a)) break;
      idx[a] = 0;
    }
  }
}

void SpectralPadding::pad(const ComplexArray& coeffs, ComplexArray& padded) const {
  padded.setZero(padded_size_);
  for (std::size_t k = 0; k < source_index_.size(); ++k)
    padded[target_index_[k]] = coeffs[source_index_[k]];
}

void SpectralPadding::truncate(const ComplexArray& padded, ComplexArray& coeffs) const {
  coeffs.setZero(source_size_);
  for (std::size_t k = 0; k < source_index_.size(); ++k)
    coeffs[source_index_[k]] = padded[target_index_[k]];
}

void SpectralPadding::to_physical(ComplexArray& padded) const {
  fft::backward(padded, padded_modes_);
  padded *= frequency_weight_;
}

void SpectralPadding::to_frequency(ComplexArray& padded) const {
  fft::forward(padded, padded_modes_);
  padded *= padded_cell_volume_;
}

}  // namespace wgnls
