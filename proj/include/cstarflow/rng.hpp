#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "cstarflow/complex_matrix.hpp"

namespace cstarflow {

/// splitmix64 finalizer; the mixing core of the counter-based generator.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Deterministic, splittable, counter-based PRNG. A stream is a key plus a
/// counter; output i is mix_bits(key + i*golden). Child streams are derived
/// by folding a textual label into the key, so suites can reproduce any case
/// from the master seed and the case's derivation path alone.
class Rng {
public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  /// Derive an independent child stream from a label.
  Rng child(std::string_view label) const {
    std::uint64_t h = key_ ^ 0x6a09e667f3bcc909ULL;
    for (unsigned char c : label) h = mix_bits(h ^ c);
    h = mix_bits(h ^ static_cast<std::uint64_t>(label.size()));
    return Rng(h);
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix_bits(key_ + counter_);
  }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (cosine branch only, fully deterministic).
  double gaussian() {
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Complex Gaussian with unit-variance real and imaginary parts.
  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  CMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  /// Random Hermitian matrix (G + G*)/2.
  CMatrix hermitian_matrix(std::size_t n) {
    CMatrix g = gaussian_matrix(n, n);
    CMatrix h = (g + adjoint(g)) * Complex(0.5, 0.0);
    return h;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream for a named case under a master seed; the derivation path is what
/// reports record next to the seed.
inline Rng case_stream(std::uint64_t master_seed, std::string_view path) {
  return Rng(master_seed).child(path);
}

} // namespace cstarflow
