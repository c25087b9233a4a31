#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/hilbert_module.hpp"

namespace cstarflow {

/// A map Phi between module spaces together with its reference algebra
/// morphism phi. Unitary module operators of this model are exactly the
/// left multiplications by a unitary with phi = Ad of the same unitary;
/// the validated factory enforces that pairing. Counterexample factories
/// deliberately skip validation so the checkers have something to catch.
class ModuleMorphism {
public:
  enum class Kind { Identity, Zero, LeftMult, Linear };

  static ModuleMorphism identity(const ModuleSpace& space) {
    return ModuleMorphism(Kind::Identity, space, space,
                          StarMorphism::identity(space.algebra_dim));
  }

  static ModuleMorphism zero(const ModuleSpace& space) {
    return ModuleMorphism(Kind::Zero, space, space,
                          StarMorphism::zero(space.algebra_dim));
  }

  /// x -> Ux with U unitary; reference phi = Ad U.
  static ModuleMorphism unitary_left_mult(const ModuleSpace& space, CMatrix u) {
    StarMorphism phi = StarMorphism::ad_unitary(u); // validates unitarity
    ModuleMorphism m(Kind::LeftMult, space, space, std::move(phi));
    m.factor_ = std::move(u);
    return m;
  }

  /// x -> Mx with an arbitrary square factor and an arbitrary reference phi.
  /// No validation: this is the construction path for counterexamples.
  static ModuleMorphism left_mult_with_reference(const ModuleSpace& space,
                                                 CMatrix m_factor,
                                                 StarMorphism phi) {
    if (m_factor.rows() != space.algebra_dim ||
        m_factor.cols() != space.algebra_dim)
      throw DimensionMismatch("ModuleMorphism: factor shape mismatch");
    ModuleMorphism m(Kind::LeftMult, space, space, std::move(phi));
    m.factor_ = std::move(m_factor);
    return m;
  }

  /// Arbitrary linear action on row-major vectorized elements (test-only).
  static ModuleMorphism linear_with_reference(const ModuleSpace& space,
                                              CMatrix vec_operator,
                                              StarMorphism phi) {
    const std::size_t dim = space.algebra_dim * space.module_cols;
    if (vec_operator.rows() != dim || vec_operator.cols() != dim)
      throw DimensionMismatch("ModuleMorphism: vectorized operator shape mismatch");
    ModuleMorphism m(Kind::Linear, space, space, std::move(phi));
    m.factor_ = std::move(vec_operator);
    return m;
  }

  Kind kind() const { return kind_; }
  const ModuleSpace& source() const { return source_; }
  const ModuleSpace& target() const { return target_; }
  const CMatrix& factor() const { return factor_; }
  const StarMorphism& reference() const { return reference_; }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Identity: return "identity";
      case Kind::Zero: return "zero";
      case Kind::LeftMult: return "left-mult";
      case Kind::Linear: return "linear";
    }
    return "unknown";
  }

private:
  ModuleMorphism(Kind kind, ModuleSpace source, ModuleSpace target,
                 StarMorphism reference)
      : kind_(kind), source_(source), target_(target),
        reference_(std::move(reference)) {}

  Kind kind_;
  ModuleSpace source_;
  ModuleSpace target_;
  CMatrix factor_;
  StarMorphism reference_;
};

inline ModuleElement apply(const ModuleMorphism& m, const ModuleElement& x) {
  if (x.space != m.source())
    throw SpaceMismatch("apply: element not in the morphism's source space");
  switch (m.kind()) {
    case ModuleMorphism::Kind::Identity:
      return x;
    case ModuleMorphism::Kind::Zero:
      return ModuleElement::zero(m.target());
    case ModuleMorphism::Kind::LeftMult:
      return ModuleElement(m.target(), matmul(m.factor(), x.value));
    case ModuleMorphism::Kind::Linear: {
      const std::vector<Complex> v = vectorize(x.value);
      const std::size_t dim = v.size();
      std::vector<Complex> out(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += m.factor()(i, j) * v[j];
        out[i] = acc;
      }
      return ModuleElement(m.target(),
                           from_vector(x.space.algebra_dim,
                                       x.space.module_cols, std::move(out)));
    }
  }
  throw std::logic_error("apply: unreachable");
}

/// The phi-morphism identity, checked two ways on random data: the diagonal
/// form <Phi x, Phi x> = phi(<x,x>) alone, and the full two-variable form.
/// Reporting both makes the polarization equivalence observable.
inline CheckReport check_phi_morphism(const ModuleMorphism& m, int trials,
                                      std::uint64_t seed, double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_phi_morphism: trials must be >= 1");
  CheckReport report("phi-morphism");
  const std::string path = "phi-morphism/" + m.kind_name();
  Rng rng = case_stream(seed, path);

  double diag_residual = 0.0, twovar_residual = 0.0;
  CMatrix diag_witness, two_witness_x, two_witness_y;

  for (int trial = 0; trial < trials; ++trial) {
    const ModuleElement x = ModuleElement::random(m.source(), rng);
    const ModuleElement y = ModuleElement::random(m.source(), rng);
    const double nx = module_norm(x), ny = module_norm(y);

    const double rd =
        norm(inner_product(apply(m, x), apply(m, x)) -
             apply_morphism(m.reference(), inner_product(x, x))) /
        (1.0 + nx * nx);
    if (rd > diag_residual) {
      diag_residual = rd;
      diag_witness = x.value;
    }

    const double rt =
        norm(inner_product(apply(m, x), apply(m, y)) -
             apply_morphism(m.reference(), inner_product(x, y))) /
        (1.0 + nx * ny);
    if (rt > twovar_residual) {
      twovar_residual = rt;
      two_witness_x = x.value;
      two_witness_y = y.value;
    }
  }

  std::map<std::string, std::string> params{
      {"kind", m.kind_name()},
      {"phi", m.reference().kind_name()},
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", path},
      {"diagonal_residual", num_str(diag_residual)},
      {"two_variable_residual", num_str(twovar_residual)}};

  CheckCase diag;
  diag.name = "diagonal";
  diag.params = params;
  diag.residual = diag_residual;
  diag.tolerance = tol;
  diag.witness = {{"x", diag_witness}};
  report.add(diag);

  CheckCase two;
  two.name = "two-variable";
  two.params = params;
  two.residual = twovar_residual;
  two.tolerance = tol;
  two.witness = {{"x", two_witness_x}, {"y", two_witness_y}};
  report.add(two);

  return report;
}

/// Linearity and the module-map property Phi(ax) = phi(a) Phi(x). Both are
/// consequences of the morphism identity, so any Phi passing
/// check_phi_morphism must pass here as well.
inline CheckReport check_derived_linearity(const ModuleMorphism& m, int trials,
                                           std::uint64_t seed, double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_derived_linearity: trials must be >= 1");
  CheckReport report("derived-linearity");
  const std::string path = "derived-linearity/" + m.kind_name();
  Rng rng = case_stream(seed, path);

  double additivity_residual = 0.0, module_map_residual = 0.0;
  CMatrix add_x, add_y, mm_a, mm_x;

  for (int trial = 0; trial < trials; ++trial) {
    const ModuleElement x = ModuleElement::random(m.source(), rng);
    const ModuleElement y = ModuleElement::random(m.source(), rng);
    const AlgebraElement a(
        rng.gaussian_matrix(m.source().algebra_dim, m.source().algebra_dim));
    const Complex alpha = rng.complex_gaussian();
    const double nx = module_norm(x), ny = module_norm(y);

    const double ra =
        module_norm(apply(m, alpha * x + y) -
                    (alpha * apply(m, x) + apply(m, y))) /
        (1.0 + std::abs(alpha) * nx + ny);
    if (ra > additivity_residual) {
      additivity_residual = ra;
      add_x = x.value;
      add_y = y.value;
    }

    const double rm =
        module_norm(apply(m, module_action(a, x)) -
                    module_action(apply_morphism(m.reference(), a),
                                  apply(m, x))) /
        (1.0 + norm(a) * nx);
    if (rm > module_map_residual) {
      module_map_residual = rm;
      mm_a = a.value;
      mm_x = x.value;
    }
  }

  const std::map<std::string, std::string> params{
      {"kind", m.kind_name()},
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", path}};

  CheckCase add;
  add.name = "additivity";
  add.params = params;
  add.residual = additivity_residual;
  add.tolerance = tol;
  add.witness = {{"x", add_x}, {"y", add_y}};
  report.add(add);

  CheckCase mm;
  mm.name = "module-map";
  mm.params = params;
  mm.residual = module_map_residual;
  mm.tolerance = tol;
  mm.witness = {{"a", mm_a}, {"x", mm_x}};
  report.add(mm);

  return report;
}

/// | ||Phi x|| - ||x|| | <= tol * ||x|| on random elements. Requires the
/// reference morphism to be injective (that is what forces the isometry).
inline CheckReport check_isometry(const ModuleMorphism& m, int trials,
                                  std::uint64_t seed, double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_isometry: trials must be >= 1");
  if (!is_injective(m.reference()))
    throw PreconditionViolated(
        "check_isometry: reference morphism is not injective");
  CheckReport report("isometry");
  const std::string path = "isometry/" + m.kind_name();
  Rng rng = case_stream(seed, path);

  double worst = 0.0;
  CMatrix witness;
  for (int trial = 0; trial < trials; ++trial) {
    const ModuleElement x = ModuleElement::random(m.source(), rng);
    const double nx = module_norm(x);
    if (nx == 0.0) continue;
    const double r = std::abs(module_norm(apply(m, x)) - nx) / nx;
    if (r > worst) {
      worst = r;
      witness = x.value;
    }
  }

  CheckCase c;
  c.name = "isometry";
  c.params = {{"kind", m.kind_name()},
              {"trials", num_str(trials)},
              {"seed", num_str(seed)},
              {"seed_path", path}};
  c.residual = worst;
  c.tolerance = tol;
  c.witness = {{"x", witness}};
  report.add(c);
  return report;
}

namespace detail {

inline StarMorphism compose_references(const StarMorphism& outer,
                                       const StarMorphism& inner) {
  using K = StarMorphism::Kind;
  if (inner.target_dim() != outer.source_dim())
    throw SpaceMismatch("compose: reference morphism dimensions disagree");
  if (outer.kind() == K::Zero || inner.kind() == K::Zero)
    return StarMorphism::zero(inner.source_dim());
  if (outer.kind() == K::Identity) return inner;
  if (inner.kind() == K::Identity) return outer;
  if (outer.kind() == K::AdUnitary && inner.kind() == K::AdUnitary)
    return StarMorphism::ad_unitary(matmul(outer.unitary(), inner.unitary()));
  throw std::invalid_argument(
      "compose: reference composition not representable for these kinds");
}

} // namespace detail

/// Psi after Phi. LeftMult(V) after LeftMult(U) = LeftMult(VU) with
/// reference Ad(VU).
inline ModuleMorphism compose(const ModuleMorphism& psi,
                              const ModuleMorphism& phi) {
  using K = ModuleMorphism::Kind;
  if (phi.target() != psi.source())
    throw SpaceMismatch("compose: inner target differs from outer source");
  if (psi.kind() == K::Zero || phi.kind() == K::Zero)
    return ModuleMorphism::zero(phi.source());
  if (psi.kind() == K::Identity) return phi;
  if (phi.kind() == K::Identity) return psi;
  if (psi.kind() == K::LeftMult && phi.kind() == K::LeftMult) {
    const CMatrix product = matmul(psi.factor(), phi.factor());
    StarMorphism reference =
        detail::compose_references(psi.reference(), phi.reference());
    return ModuleMorphism::left_mult_with_reference(phi.source(), product,
                                                    std::move(reference));
  }
  throw std::invalid_argument("compose: unsupported kind combination");
}

/// Unitary operator test: (a) the phi-morphism identity, (b) injectivity of
/// phi, (c) surjectivity of Phi decided by exact rank of its action on the
/// vectorized module. The report also records the rank of phi's unit images,
/// which witnesses surjectivity of phi for surjective Phi onto a full module.
inline CheckReport check_unitary(const ModuleMorphism& m, int trials,
                                 std::uint64_t seed, double tol) {
  CheckReport report("unitary");
  report.absorb(check_phi_morphism(m, trials, seed, tol), "phi-morphism");

  const std::size_t n = m.source().algebra_dim;
  const std::size_t k = m.source().module_cols;

  CheckCase inj;
  inj.name = "phi-injective";
  inj.params = {{"kind", m.kind_name()}, {"phi", m.reference().kind_name()}};
  inj.residual = is_injective(m.reference()) ? 0.0 : 1.0;
  inj.tolerance = 0.5;
  report.add(inj);

  // Rank of Phi on the vectorized module: images of the module matrix units.
  std::vector<CMatrix> images;
  images.reserve(n * k);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < k; ++q)
      images.push_back(apply(m, ModuleElement::unit(m.source(), p, q)).value);
  const std::size_t rank = rank_span(images);

  CheckCase surj;
  surj.name = "surjective";
  surj.params = {{"kind", m.kind_name()},
                 {"rank", num_str(rank)},
                 {"full_rank", num_str(n * k)}};
  surj.residual = rank == n * k ? 0.0 : 1.0;
  surj.tolerance = 0.5;
  report.add(surj);

  std::vector<CMatrix> phi_images;
  phi_images.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      phi_images.push_back(
          apply_morphism(m.reference(), AlgebraElement::unit(n, p, q)).value);
  const std::size_t phi_rank = rank_span(phi_images);

  CheckCase phi_surj;
  phi_surj.name = "phi-surjectivity-rank";
  phi_surj.params = {{"kind", m.kind_name()},
                     {"rank", num_str(phi_rank)},
                     {"full_rank", num_str(n * n)}};
  phi_surj.residual = phi_rank == n * n ? 0.0 : 1.0;
  phi_surj.tolerance = 0.5;
  report.add(phi_surj);

  return report;
}

} // namespace cstarflow
