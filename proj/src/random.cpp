#include "wgnls/random.hpp"

#include <cmath>
#include <numbers>

namespace wgnls::rng {
namespace {

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  return mix(mix(mix(seed) ^ stream) ^ index);
}

std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t index) noexcept {
  return {unit(key(seed, stream, 2 * index)), unit(key(seed, stream, 2 * index + 1))};
}

std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t index) noexcept {
  const auto [u1, u2] = uniform_pair(seed, stream, index);
  return std::polar(std::sqrt(-std::log1p(-u1)), 2.0 * std::numbers::pi * u2);
}

std::complex<double> random_phase(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) noexcept {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform_pair(seed, stream, index).second);
}

}  // namespace wgnls::rng
