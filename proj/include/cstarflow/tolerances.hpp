#pragma once

namespace cstarflow {

/// Central numeric tolerances, all relative. Overridable per-suite via the
/// CLI tolerance table; these are the library-level defaults.
struct Tolerances {
  double eig = 1e-10;   // eigendecomposition orthonormality / reconstruction
  double herm = 1e-12;  // Hermitian-input precondition
  double rank = 1e-8;   // pivot threshold in span-rank elimination
};

inline constexpr Tolerances kTolerances{};

} // namespace cstarflow
