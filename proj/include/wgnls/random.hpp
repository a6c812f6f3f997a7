#pragma once

// Counter-based deterministic draws. Every value is a pure function of
// (seed, stream, index), so generated data does not depend on iteration order
// or worker count.
//
//   key(seed, stream, index) = mix(mix(mix(seed) ^ stream) ^ index)
//   mix = SplitMix64 finalizer applied to x + 0x9E3779B97F4A7C15
//   uniform: top 53 bits of key(.., 2 index) and key(.., 2 index + 1), in [0, 1)
//   complex_gaussian: Box-Muller, sqrt(-ln(1 - u1)) e^{2 pi i u2}, E|z|^2 = 1

#include <complex>
#include <cstdint>
#include <utility>

namespace wgnls::rng {

std::uint64_t mix(std::uint64_t x) noexcept;
std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;
/// Uniform pair in [0, 1) for one (seed, stream, index).
std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t index) noexcept;
std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t index) noexcept;
/// Unit-modulus phase e^{2 pi i u}.
std::complex<double> random_phase(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) noexcept;

}  // namespace wgnls::rng
