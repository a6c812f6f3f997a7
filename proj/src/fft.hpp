#pragma once

// Unnormalized in-place multidimensional DFTs over row-major complex arrays.
// Plans are created once per extent list (FFTW_ESTIMATE, so plan choice and
// therefore rounding are reproducible) and executed through the new-array
// interface, which is safe to call concurrently.

#include <Eigen/Core>

#include <span>

namespace wgnls::fft {

/// out[k] = sum_j in[j] e^{-2 pi i j.k / M}
void forward(Eigen::ArrayXcd& data, std::span<const int> extents);
/// out[j] = sum_k in[k] e^{+2 pi i j.k / M}
void backward(Eigen::ArrayXcd& data, std::span<const int> extents);

}  // namespace wgnls::fft
