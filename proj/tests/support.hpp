#pragma once

#include "wgnls/error.hpp"
#include "wgnls/grid.hpp"
#include "wgnls/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace testing {

using namespace wgnls;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline GridSpec torus3(int m, double period = 1.0) {
  return GridSpec({Direction::torus(period), Direction::torus(period), Direction::torus(period)},
                  {m, m, m});
}

/// Independent complex Gaussian samples at every lattice point.
inline SpatialField random_spatial(const GridSpec& g, std::uint64_t seed) {
  SpatialField f(g);
  for (Eigen::Index p = 0; p < g.size(); ++p)
    f.values()[p] = rng::complex_gaussian(seed, 99, static_cast<std::uint64_t>(p));
  return f;
}

/// Random coefficients with Nyquist slots already zero.
inline SpectralField random_spectral(const GridSpec& g, std::uint64_t seed) {
  ComplexArray c(g.size());
  for (Eigen::Index p = 0; p < g.size(); ++p)
    c[p] = rng::complex_gaussian(seed, 98, static_cast<std::uint64_t>(p));
  return SpectralField(g, std::move(c));
}

/// Random coefficients supported on |xi_a| <= kmax for every axis.
inline SpectralField band_limited(const GridSpec& g, double kmax, std::uint64_t seed) {
  ComplexArray c = ComplexArray::Zero(g.size());
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside = inside && std::abs(g.xi(a)[p]) <= kmax + 1e-9;
    if (inside) c[p] = rng::complex_gaussian(seed, 97, static_cast<std::uint64_t>(p));
  }
  return SpectralField(g, std::move(c));
}

inline double rel_diff(const ComplexArray& a, const ComplexArray& b) {
  return std::sqrt((a - b).abs2().sum() / b.abs2().sum());
}

inline SpatialField plane_wave(const GridSpec& g, Complex a, const std::vector<double>& xi0) {
  SpatialField f(g);
  const int d = g.dim();
  std::vector<int> idx(d, 0);
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    double phase = 0.0;
    for (int ax = 0; ax < d; ++ax) phase += xi0[ax] * g.coordinate(ax, idx[ax]);
    f.values()[p] = a * std::polar(1.0, phase);
    for (int ax = d - 1; ax >= 0; --ax) {
      if (++idx[ax] < g.modes(ax)) break;
      idx[ax] = 0;
    }
  }
  return f;
}

/// Error code thrown by fn, or io_error when nothing is thrown.
template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_error;
}

}  // namespace testing
