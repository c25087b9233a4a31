#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "cstarflow/complex_matrix.hpp"
#include "cstarflow/errors.hpp"
#include "cstarflow/rng.hpp"
#include "cstarflow/tolerances.hpp"

namespace cstarflow {

/// Result of a Hermitian eigendecomposition A = Q diag(lambda) Q*.
/// Eigenvalues ascending, eigenvector columns orthonormal.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;
};

/// Hermitian to relative Frobenius tolerance. Frobenius (not spectral) so the
/// test itself needs no eigendecomposition.
inline bool is_hermitian(const CMatrix& a, double tau = kTolerances.herm) {
  if (!a.square()) return false;
  const double scale = a.frobenius_norm();
  if (scale == 0.0) return true;
  return (a - adjoint(a)).frobenius_norm() <= tau * scale;
}

namespace detail {

/// One full cyclic sweep of complex Jacobi rotations. Zeroes each
/// off-diagonal pair (p,q) in turn with the unitary
///   U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]],  A(p,q) = |b| e^{i phi},
/// the phase-adjusted Givens rotation. Updates A in place and accumulates
/// the rotations into Q.
inline void jacobi_sweep(CMatrix& a, CMatrix& q) {
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      const Complex b = a(p, r);
      const double absb = std::abs(b);
      if (absb <= 1e-280) continue;
      const Complex phase = b / absb; // e^{i phi}
      const double alpha = a(p, p).real();
      const double gamma = a(r, r).real();
      const double tau = (gamma - alpha) / (2.0 * absb);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const Complex sp = s * std::conj(phase);  // -U(r,p) and U(r,r)/c
      // Columns p, r of A <- A U and of Q <- Q U.
      for (std::size_t i = 0; i < n; ++i) {
        const Complex aip = a(i, p);
        const Complex air = a(i, r);
        a(i, p) = c * aip - sp * air;
        a(i, r) = s * aip + c * std::conj(phase) * air;
        const Complex qip = q(i, p);
        const Complex qir = q(i, r);
        q(i, p) = c * qip - sp * qir;
        q(i, r) = s * qip + c * std::conj(phase) * qir;
      }
      // Rows p, r of A <- U* A.
      for (std::size_t j = 0; j < n; ++j) {
        const Complex apj = a(p, j);
        const Complex arj = a(r, j);
        a(p, j) = c * apj - s * phase * arj;
        a(r, j) = s * apj + c * phase * arj;
      }
      // The rotation annihilates (p,r) exactly in exact arithmetic; pin the
      // pair and keep the diagonal real so roundoff cannot accumulate there.
      a(p, r) = 0.0;
      a(r, p) = 0.0;
      a(p, p) = Complex(a(p, p).real(), 0.0);
      a(r, r) = Complex(a(r, r).real(), 0.0);
    }
  }
}

inline double offdiagonal_mass(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

} // namespace detail

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Robust and
/// simple at the dimensions this library targets (n <= 64). Converges when
/// the off-diagonal Frobenius mass drops below 1e-13 * ||A||_F; at most 30
/// sweeps before NoConvergence.
inline EigenDecomposition herm_eig(const CMatrix& input,
                                   double tau_herm = kTolerances.herm) {
  if (!input.square()) throw NotHermitian("herm_eig: matrix is not square");
  if (!is_hermitian(input, tau_herm))
    throw NotHermitian("herm_eig: matrix is not Hermitian within tolerance");
  const std::size_t n = input.rows();

  // Symmetrize away the roundoff-level skew part allowed by the precondition.
  CMatrix a = (input + adjoint(input)) * Complex(0.5, 0.0);
  CMatrix q = CMatrix::identity(n);

  const double anorm = a.frobenius_norm();
  constexpr int kMaxSweeps = 30;
  constexpr double kOffdiagFactor = 1e-13;
  if (anorm > 0.0) {
    int sweep = 0;
    while (detail::offdiagonal_mass(a) > kOffdiagFactor * anorm) {
      if (sweep++ >= kMaxSweeps)
        throw NoConvergence("herm_eig: Jacobi iteration exceeded max sweeps");
      detail::jacobi_sweep(a, q);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t jnew = 0; jnew < n; ++jnew) {
    const std::size_t jold = order[jnew];
    out.eigenvalues[jnew] = a(jold, jold).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, jnew) = q(i, jold);
  }
  return out;
}

/// Spectral norm: sqrt of the largest eigenvalue of A*A. Returns 0 for the
/// zero matrix without touching the eigensolver.
inline double op_norm(const CMatrix& a) {
  if (a.frobenius_norm() == 0.0) return 0.0;
  const CMatrix gram = matmul(adjoint(a), a);
  const EigenDecomposition eig = herm_eig(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix; clamped
/// at zero against roundoff.
inline double psd_max_eigenvalue(const CMatrix& a) {
  if (a.frobenius_norm() == 0.0) return 0.0;
  const EigenDecomposition eig = herm_eig(a);
  return std::max(0.0, eig.eigenvalues.back());
}

/// e^{itT} from a precomputed eigendecomposition of Hermitian T; the
/// dynamics module caches the decomposition of its generator so the
/// one-parameter group law holds to roundoff (shared eigenbasis). t = 0
/// returns the exact identity.
inline CMatrix expm_i_from(const EigenDecomposition& eig, double t) {
  const std::size_t n = eig.eigenvalues.size();
  if (t == 0.0) return CMatrix::identity(n);
  std::vector<Complex> phases(n);
  for (std::size_t j = 0; j < n; ++j)
    phases[j] = std::polar(1.0, t * eig.eigenvalues[j]);
  CMatrix qd = eig.eigenvectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qd(i, j) *= phases[j];
  return matmul(qd, adjoint(eig.eigenvectors));
}

/// e^{itT} for Hermitian T.
inline CMatrix expm_i(const CMatrix& t_matrix, double t) {
  const EigenDecomposition eig = herm_eig(t_matrix);
  return expm_i_from(eig, t);
}

/// Dimension of the complex linear span of the vectorized matrices.
/// Pivoted elimination; a pivot counts iff its magnitude exceeds
/// tau_rank times the largest entry magnitude of the initial stack.
inline std::size_t rank_span(const std::vector<CMatrix>& mats,
                             double tau_rank = kTolerances.rank) {
  if (mats.empty()) throw ShapeMismatch("rank_span: empty list");
  const std::size_t rows = mats.front().rows();
  const std::size_t cols = mats.front().cols();
  for (const auto& m : mats)
    if (m.rows() != rows || m.cols() != cols)
      throw ShapeMismatch("rank_span: matrices have different shapes");

  const std::size_t nvec = mats.size();
  const std::size_t dim = rows * cols;
  std::vector<std::vector<Complex>> r(nvec);
  double max_initial = 0.0;
  for (std::size_t i = 0; i < nvec; ++i) {
    r[i] = vectorize(mats[i]);
    for (const auto& e : r[i]) max_initial = std::max(max_initial, std::abs(e));
  }
  if (max_initial == 0.0) return 0;
  const double threshold = tau_rank * max_initial;

  std::vector<std::size_t> colperm(dim);
  std::iota(colperm.begin(), colperm.end(), 0);

  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(nvec, dim); ++step) {
    // Full pivot search over the remaining submatrix.
    double best = 0.0;
    std::size_t bi = step, bj = step;
    for (std::size_t i = step; i < nvec; ++i) {
      for (std::size_t j = step; j < dim; ++j) {
        const double mag = std::abs(r[i][colperm[j]]);
        if (mag > best) {
          best = mag;
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= threshold) break;
    std::swap(r[step], r[bi]);
    std::swap(colperm[step], colperm[bj]);
    const Complex pivot = r[step][colperm[step]];
    for (std::size_t i = step + 1; i < nvec; ++i) {
      const Complex factor = r[i][colperm[step]] / pivot;
      if (factor == 0.0) continue;
      for (std::size_t j = step; j < dim; ++j)
        r[i][colperm[j]] -= factor * r[step][colperm[j]];
    }
    ++rank;
  }
  return rank;
}

/// Haar-ish random unitary: the unitary exponential of a random Hermitian
/// matrix. Unitary to roundoff by construction.
inline CMatrix random_unitary(Rng& rng, std::size_t n) {
  return expm_i(rng.hermitian_matrix(n), 1.0);
}

} // namespace cstarflow
