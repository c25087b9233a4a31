#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/hilbert_module.hpp"

namespace cstarflow {

namespace detail {

/// Apply a dense operator on row-major vectorized matrices.
inline CMatrix apply_vec_operator(const CMatrix& op, const CMatrix& x) {
  const std::vector<Complex> v = vectorize(x);
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += op(i, j) * v[j];
    out[i] = acc;
  }
  return from_vector(x.rows(), x.cols(), std::move(out));
}

/// Dense operator matrix of a linear map on rows x cols matrices, built by
/// applying the map to every matrix unit.
inline CMatrix operator_matrix(
    const std::function<CMatrix(const CMatrix&)>& map, std::size_t rows,
    std::size_t cols) {
  const std::size_t dim = rows * cols;
  CMatrix op(dim, dim);
  std::size_t column = 0;
  for (std::size_t p = 0; p < rows; ++p) {
    for (std::size_t q = 0; q < cols; ++q) {
      const CMatrix image = map(CMatrix::unit(rows, cols, p, q));
      const std::vector<Complex> v = vectorize(image);
      for (std::size_t i = 0; i < dim; ++i) op(i, column) = v[i];
      ++column;
    }
  }
  return op;
}

} // namespace detail

/// A pair (delta on the module, d on the algebra) with
/// delta(ax) = a delta(x) + d(a) x. Both maps are stored as dense operators
/// on vectorized elements, so linearity holds structurally and linear
/// combinations and Lie brackets are plain matrix arithmetic.
struct GeneralizedDerivation {
  ModuleSpace space;
  CMatrix delta_op; // (n k) x (n k), row-major vectorization
  CMatrix d_op;     // n^2 x n^2
  std::string kind = "general";

  ModuleElement apply_delta(const ModuleElement& x) const {
    if (x.space != space)
      throw SpaceMismatch("apply_delta: element from another space");
    return ModuleElement(space, detail::apply_vec_operator(delta_op, x.value));
  }

  AlgebraElement apply_d(const AlgebraElement& a) const {
    if (a.dim() != space.algebra_dim)
      throw DimensionMismatch("apply_d: algebra dimension mismatch");
    return AlgebraElement(detail::apply_vec_operator(d_op, a.value));
  }
};

/// Test-only escape hatch: wrap arbitrary operators without any checking.
inline GeneralizedDerivation general_derivation(const ModuleSpace& space,
                                                CMatrix delta_op, CMatrix d_op,
                                                std::string kind = "general") {
  return GeneralizedDerivation{space, std::move(delta_op), std::move(d_op),
                               std::move(kind)};
}

/// The derivation pair of a Hermitian generator: delta(x) = iTx and
/// d(a) = i[T,a]. The defining identity iT(ax) = a(iTx) + i[T,a]x is an
/// associativity rearrangement, so it holds to roundoff; construction
/// spot-checks it on random probes.
inline GeneralizedDerivation commutator_derivation(const CMatrix& t,
                                                   const ModuleSpace& space) {
  if (t.rows() != space.algebra_dim || t.cols() != space.algebra_dim)
    throw DimensionMismatch("commutator_derivation: generator shape mismatch");
  if (!is_hermitian(t))
    throw NotHermitian("commutator_derivation: generator is not Hermitian");

  const Complex i_unit(0.0, 1.0);
  const std::size_t n = space.algebra_dim;
  const std::size_t k = space.module_cols;

  GeneralizedDerivation gd;
  gd.space = space;
  gd.kind = "commutator";
  gd.delta_op = detail::operator_matrix(
      [&](const CMatrix& x) { return i_unit * matmul(t, x); }, n, k);
  gd.d_op = detail::operator_matrix(
      [&](const CMatrix& a) {
        return i_unit * (matmul(t, a) - matmul(a, t));
      },
      n, n);

  Rng probe = case_stream(0x5eedbeefULL, "commutator-derivation-probe");
  for (int trial = 0; trial < 3; ++trial) {
    const AlgebraElement a(probe.gaussian_matrix(n, n));
    const ModuleElement x = ModuleElement::random(space, probe);
    const ModuleElement lhs = gd.apply_delta(module_action(a, x));
    const ModuleElement rhs =
        module_action(a, gd.apply_delta(x)) + module_action(gd.apply_d(a), x);
    const double scale = 1.0 + norm(a) * module_norm(x) * op_norm(t);
    if (module_norm(lhs - rhs) / scale > 1e-10)
      throw std::logic_error(
          "commutator_derivation: defining identity failed at construction");
  }
  return gd;
}

/// delta(ax) = a delta(x) + d(a) x on random pairs, scaled residual.
inline CheckReport check_generalized_leibniz(const GeneralizedDerivation& gd,
                                             int trials, std::uint64_t seed,
                                             double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_generalized_leibniz: trials must be >= 1");
  CheckReport report("generalized-leibniz");
  const std::string path = "generalized-leibniz/" + gd.kind;
  Rng rng = case_stream(seed, path);

  double worst = 0.0;
  CMatrix witness_a, witness_x;
  for (int trial = 0; trial < trials; ++trial) {
    const AlgebraElement a(
        rng.gaussian_matrix(gd.space.algebra_dim, gd.space.algebra_dim));
    const ModuleElement x = ModuleElement::random(gd.space, rng);
    const ModuleElement lhs = gd.apply_delta(module_action(a, x));
    const ModuleElement rhs =
        module_action(a, gd.apply_delta(x)) + module_action(gd.apply_d(a), x);
    const double r =
        module_norm(lhs - rhs) / (1.0 + norm(a) * module_norm(x));
    if (r > worst) {
      worst = r;
      witness_a = a.value;
      witness_x = x.value;
    }
  }

  CheckCase c;
  c.name = "leibniz";
  c.params = {{"kind", gd.kind},
              {"trials", num_str(trials)},
              {"seed", num_str(seed)},
              {"seed_path", path}};
  c.residual = worst;
  c.tolerance = tol;
  c.witness = {{"a", witness_a}, {"x", witness_x}};
  report.add(c);
  return report;
}

/// d(ab) = a d(b) + d(a) b, which the generalized Leibniz identity forces on
/// a full module. The tolerance is widened to 10x the Leibniz tolerance to
/// absorb the sqrt(n) constant of the annihilator bound. Refuses to run on a
/// pair that fails the generalized Leibniz check itself.
inline CheckReport check_induced_d_is_derivation(
    const GeneralizedDerivation& gd, int trials, std::uint64_t seed,
    double tol) {
  if (trials < 1)
    throw PreconditionViolated(
        "check_induced_d_is_derivation: trials must be >= 1");
  if (!check_generalized_leibniz(gd, trials, seed, tol).all_passed())
    throw PreconditionViolated(
        "check_induced_d_is_derivation: pair is not a generalized derivation "
        "at this tolerance");

  CheckReport report("induced-d-derivation");
  const std::string path = "induced-d/" + gd.kind;
  Rng rng = case_stream(seed, path);
  const double effective_tol = 10.0 * tol;

  double worst = 0.0;
  CMatrix witness_a, witness_b;
  for (int trial = 0; trial < trials; ++trial) {
    const AlgebraElement a(
        rng.gaussian_matrix(gd.space.algebra_dim, gd.space.algebra_dim));
    const AlgebraElement b(
        rng.gaussian_matrix(gd.space.algebra_dim, gd.space.algebra_dim));
    const AlgebraElement lhs = gd.apply_d(a * b);
    const AlgebraElement rhs = a * gd.apply_d(b) + gd.apply_d(a) * b;
    const double r = norm(lhs - rhs) / (1.0 + norm(a) * norm(b));
    if (r > worst) {
      worst = r;
      witness_a = a.value;
      witness_b = b.value;
    }
  }

  CheckCase c;
  c.name = "derivation";
  c.params = {{"kind", gd.kind},
              {"trials", num_str(trials)},
              {"seed", num_str(seed)},
              {"seed_path", path},
              {"base_tolerance", num_str(tol)}};
  c.residual = worst;
  c.tolerance = effective_tol;
  c.witness = {{"a", witness_a}, {"b", witness_b}};
  report.add(c);
  return report;
}

/// The algebra map recovered from a module map alone.
struct RecoveredAlgebraMap {
  CMatrix op; // n^2 x n^2 on vectorized algebra elements
  double max_residual = 0.0;

  AlgebraElement apply(const AlgebraElement& a) const {
    return AlgebraElement(detail::apply_vec_operator(op, a.value));
  }
};

/// Solve d(a) x = delta(ax) - a delta(x) for d. For each algebra unit E_pq
/// the map x -> delta(E_pq x) - E_pq delta(x) must be left multiplication by
/// a single matrix; fullness makes that matrix unique. Returns nullopt when
/// the action is not consistent with any left multiplication within tol.
/// delta must be linear; that is probed and enforced.
inline std::optional<RecoveredAlgebraMap> recover_d(
    const std::function<ModuleElement(const ModuleElement&)>& delta,
    const ModuleSpace& space, double tol = 1e-8) {
  const std::size_t n = space.algebra_dim;
  const std::size_t k = space.module_cols;

  {
    Rng probe = case_stream(0x11bea7ULL, "recover-d-linearity-probe");
    for (int trial = 0; trial < 4; ++trial) {
      const ModuleElement x = ModuleElement::random(space, probe);
      const ModuleElement y = ModuleElement::random(space, probe);
      const Complex alpha = probe.complex_gaussian();
      const double r =
          module_norm(delta(alpha * x + y) -
                      (alpha * delta(x) + delta(y))) /
          (1.0 + std::abs(alpha) * module_norm(x) + module_norm(y));
      if (r > 1e-10)
        throw PreconditionViolated("recover_d: delta is not complex-linear");
    }
  }

  RecoveredAlgebraMap result;
  result.op = CMatrix(n * n, n * n);
  std::size_t column = 0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const AlgebraElement a = AlgebraElement::unit(n, p, q);
      auto bracket = [&](const ModuleElement& x) {
        return delta(module_action(a, x)) - module_action(a, delta(x));
      };

      // Candidate d(a): read its columns off the first-column generators.
      CMatrix candidate(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        const ModuleElement image = bracket(ModuleElement::unit(space, j, 0));
        for (std::size_t i = 0; i < n; ++i) candidate(i, j) = image.value(i, 0);
      }

      // Consistency across every canonical generator.
      const double scale = 1.0 + op_norm(candidate);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < k; ++l) {
          const ModuleElement generator = ModuleElement::unit(space, j, l);
          const ModuleElement expected =
              module_action(AlgebraElement(candidate), generator);
          const double r =
              module_norm(bracket(generator) - expected) / scale;
          result.max_residual = std::max(result.max_residual, r);
          if (r > tol) return std::nullopt;
        }
      }

      const std::vector<Complex> v = vectorize(candidate);
      for (std::size_t i = 0; i < n * n; ++i) result.op(i, column) = v[i];
      ++column;
    }
  }
  return result;
}

/// (alpha delta1 + beta delta2, alpha d1 + beta d2); a generalized
/// derivation whenever the inputs are.
inline GeneralizedDerivation linear_combination(const GeneralizedDerivation& g1,
                                                const GeneralizedDerivation& g2,
                                                Complex alpha, Complex beta) {
  if (g1.space != g2.space)
    throw SpaceMismatch("linear_combination: different module spaces");
  GeneralizedDerivation out;
  out.space = g1.space;
  out.kind = "linear-combination";
  out.delta_op = alpha * g1.delta_op + beta * g2.delta_op;
  out.d_op = alpha * g1.d_op + beta * g2.d_op;
  return out;
}

/// ([delta1, delta2], [d1, d2]); closes GDer(M) under the Lie product.
inline GeneralizedDerivation lie_bracket(const GeneralizedDerivation& g1,
                                         const GeneralizedDerivation& g2) {
  if (g1.space != g2.space)
    throw SpaceMismatch("lie_bracket: different module spaces");
  GeneralizedDerivation out;
  out.space = g1.space;
  out.kind = "lie-bracket";
  out.delta_op = matmul(g1.delta_op, g2.delta_op) -
                 matmul(g2.delta_op, g1.delta_op);
  out.d_op = matmul(g1.d_op, g2.d_op) - matmul(g2.d_op, g1.d_op);
  return out;
}

} // namespace cstarflow
