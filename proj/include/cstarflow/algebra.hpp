#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/linalg.hpp"
#include "cstarflow/report.hpp"
#include "cstarflow/rng.hpp"

namespace cstarflow {

/// Element of the matrix C*-algebra M_n.
struct AlgebraElement {
  CMatrix value;

  AlgebraElement() = default;
  explicit AlgebraElement(CMatrix v) : value(std::move(v)) {
    if (!value.square())
      throw DimensionMismatch("AlgebraElement: matrix must be square");
  }

  std::size_t dim() const { return value.rows(); }

  static AlgebraElement zero(std::size_t n) { return AlgebraElement(CMatrix(n, n)); }
  static AlgebraElement identity(std::size_t n) {
    return AlgebraElement(CMatrix::identity(n));
  }
  static AlgebraElement unit(std::size_t n, std::size_t p, std::size_t q) {
    return AlgebraElement(CMatrix::unit(n, n, p, q));
  }
};

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return AlgebraElement(matmul(a.value, b.value));
}
inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  return AlgebraElement(a.value + b.value);
}
inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return AlgebraElement(a.value - b.value);
}
inline AlgebraElement operator*(Complex s, const AlgebraElement& a) {
  return AlgebraElement(s * a.value);
}
inline AlgebraElement star(const AlgebraElement& a) {
  return AlgebraElement(adjoint(a.value));
}
inline double norm(const AlgebraElement& a) { return op_norm(a.value); }

/// A *-homomorphism between matrix algebras, represented structurally by a
/// small closed set of kinds. Every kind the dynamics layer needs (Ad of a
/// unitary) is exactly representable, and injectivity/surjectivity are
/// decidable without rank heuristics. The Transpose kind is deliberately
/// NOT a homomorphism; it exists to exercise failure paths.
class StarMorphism {
public:
  enum class Kind { Identity, Zero, AdUnitary, BlockEmbed, Transpose };

  static StarMorphism identity(std::size_t n) {
    return StarMorphism(Kind::Identity, n, n);
  }

  static StarMorphism zero(std::size_t n) {
    return StarMorphism(Kind::Zero, n, n);
  }

  /// Ad U : a -> U a U*. U must be unitary to 1e-10.
  static StarMorphism ad_unitary(CMatrix u) {
    if (!u.square())
      throw DimensionMismatch("StarMorphism: AdUnitary needs a square matrix");
    const std::size_t n = u.rows();
    const double defect =
        op_norm(matmul(adjoint(u), u) - CMatrix::identity(n));
    if (defect > 1e-10)
      throw PreconditionViolated("StarMorphism: AdUnitary matrix is not unitary");
    StarMorphism m(Kind::AdUnitary, n, n);
    m.unitary_ = std::move(u);
    return m;
  }

  /// Place M_n as a diagonal block of M_m starting at the given offset.
  static StarMorphism block_embed(std::size_t source_dim, std::size_t target_dim,
                                  std::size_t offset) {
    if (offset + source_dim > target_dim)
      throw DimensionMismatch("StarMorphism: block does not fit in target");
    StarMorphism m(Kind::BlockEmbed, source_dim, target_dim);
    m.offset_ = offset;
    return m;
  }

  /// a -> a^T. Linear and *-preserving but anti-multiplicative; the standard
  /// counterexample for the homomorphism checker.
  static StarMorphism transpose_counterexample(std::size_t n) {
    return StarMorphism(Kind::Transpose, n, n);
  }

  Kind kind() const { return kind_; }
  std::size_t source_dim() const { return source_dim_; }
  std::size_t target_dim() const { return target_dim_; }
  const CMatrix& unitary() const { return unitary_; }
  std::size_t offset() const { return offset_; }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Identity: return "identity";
      case Kind::Zero: return "zero";
      case Kind::AdUnitary: return "ad-unitary";
      case Kind::BlockEmbed: return "block-embed";
      case Kind::Transpose: return "transpose";
    }
    return "unknown";
  }

private:
  StarMorphism(Kind kind, std::size_t source_dim, std::size_t target_dim)
      : kind_(kind), source_dim_(source_dim), target_dim_(target_dim) {}

  Kind kind_;
  std::size_t source_dim_;
  std::size_t target_dim_;
  CMatrix unitary_;
  std::size_t offset_ = 0;
};

inline AlgebraElement apply_morphism(const StarMorphism& phi,
                                     const AlgebraElement& a) {
  if (a.dim() != phi.source_dim())
    throw DimensionMismatch("apply_morphism: element dimension mismatch");
  switch (phi.kind()) {
    case StarMorphism::Kind::Identity:
      return a;
    case StarMorphism::Kind::Zero:
      return AlgebraElement::zero(phi.target_dim());
    case StarMorphism::Kind::AdUnitary:
      return AlgebraElement(
          matmul(matmul(phi.unitary(), a.value), adjoint(phi.unitary())));
    case StarMorphism::Kind::BlockEmbed: {
      CMatrix out(phi.target_dim(), phi.target_dim());
      for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
          out(phi.offset() + i, phi.offset() + j) = a.value(i, j);
      return AlgebraElement(std::move(out));
    }
    case StarMorphism::Kind::Transpose: {
      CMatrix out(a.dim(), a.dim());
      for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = a.value(j, i);
      return AlgebraElement(std::move(out));
    }
  }
  throw std::logic_error("apply_morphism: unreachable");
}

/// Structural injectivity, cross-checked at small dimension by the rank of
/// the images of the matrix units.
inline bool is_injective(const StarMorphism& phi) {
  const bool structural = phi.kind() != StarMorphism::Kind::Zero;
  const std::size_t n = phi.source_dim();
  if (n <= 8) {
    std::vector<CMatrix> images;
    images.reserve(n * n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        images.push_back(apply_morphism(phi, AlgebraElement::unit(n, p, q)).value);
    const bool by_rank = rank_span(images) == n * n;
    if (by_rank != structural)
      throw std::logic_error("is_injective: structural and rank answers disagree");
  }
  return structural;
}

/// Verifies multiplicativity, *-preservation, and linearity of phi on random
/// pairs. Failure is a report outcome, never an exception.
inline CheckReport check_star_homomorphism(const StarMorphism& phi, int trials,
                                           std::uint64_t seed, double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_star_homomorphism: trials must be >= 1");
  CheckReport report("star-homomorphism");
  Rng rng = case_stream(seed, "star-homomorphism/" + phi.kind_name());
  const std::size_t n = phi.source_dim();

  struct Worst {
    double residual = 0.0;
    CMatrix a, b;
  };
  Worst mult, starp, lin;

  for (int trial = 0; trial < trials; ++trial) {
    const AlgebraElement a(rng.gaussian_matrix(n, n));
    const AlgebraElement b(rng.gaussian_matrix(n, n));
    const Complex alpha = rng.complex_gaussian();
    const double na = norm(a), nb = norm(b);

    const double r_mult =
        norm(apply_morphism(phi, a * b) -
             apply_morphism(phi, a) * apply_morphism(phi, b)) /
        (1.0 + na * nb);
    if (r_mult > mult.residual) mult = {r_mult, a.value, b.value};

    const double r_star =
        norm(apply_morphism(phi, star(a)) - star(apply_morphism(phi, a))) /
        (1.0 + na);
    if (r_star > starp.residual) starp = {r_star, a.value, b.value};

    const double r_lin =
        norm(apply_morphism(phi, alpha * a + b) -
             (alpha * apply_morphism(phi, a) + apply_morphism(phi, b))) /
        (1.0 + std::abs(alpha) * na + nb);
    if (r_lin > lin.residual) lin = {r_lin, a.value, b.value};
  }

  const std::map<std::string, std::string> params{
      {"kind", phi.kind_name()},
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", "star-homomorphism/" + phi.kind_name()}};

  auto make_case = [&](const std::string& name, const Worst& w) {
    CheckCase c;
    c.name = name;
    c.params = params;
    c.residual = w.residual;
    c.tolerance = tol;
    c.witness = {{"a", w.a}, {"b", w.b}};
    return c;
  };
  report.add(make_case("multiplicative", mult));
  report.add(make_case("star-preserving", starp));
  report.add(make_case("linear", lin));
  return report;
}

/// Positive iff Hermitian within tol*||a|| and min eigenvalue >= -tol*||a||.
/// The zero element is positive by definition.
inline bool is_positive(const AlgebraElement& a, double tol) {
  if (a.value.is_zero()) return true;
  const double scale = op_norm(a.value);
  if (op_norm(a.value - adjoint(a.value)) > tol * scale) return false;
  const CMatrix herm = (a.value + adjoint(a.value)) * Complex(0.5, 0.0);
  const EigenDecomposition eig = herm_eig(herm);
  return eig.eigenvalues.front() >= -tol * scale;
}

} // namespace cstarflow
