#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/algebra.hpp"
#include "cstarflow/linalg.hpp"
#include "cstarflow/report.hpp"

namespace cstarflow {

namespace detail {

/// Span of a set of algebra elements equals all of M_n?
inline bool span_is_full(const std::vector<AlgebraElement>& elements,
                         std::size_t n, double tau_rank = kTolerances.rank) {
  std::vector<CMatrix> mats;
  mats.reserve(elements.size());
  for (const auto& e : elements) mats.push_back(e.value);
  return rank_span(mats, tau_rank) == n * n;
}

} // namespace detail

/// The left Hilbert M_n-module of n x k matrices with a.x = ax and
/// <x,y> = x y*. Always full; fullness is asserted at construction.
struct ModuleSpace {
  std::size_t algebra_dim = 0; // n
  std::size_t module_cols = 0; // k

  ModuleSpace() = default;

  ModuleSpace(std::size_t n, std::size_t k) : algebra_dim(n), module_cols(k) {
    if (n < 1 || k < 1)
      throw DimensionMismatch("ModuleSpace: dimensions must be >= 1");
    assert_full();
  }

  friend bool operator==(const ModuleSpace& a, const ModuleSpace& b) {
    return a.algebra_dim == b.algebra_dim && a.module_cols == b.module_cols;
  }
  friend bool operator!=(const ModuleSpace& a, const ModuleSpace& b) {
    return !(a == b);
  }

private:
  /// The inner products of the first-column generators E_{p1} are exactly
  /// the matrix units E_{pr}, so they witness fullness on their own. Small
  /// dimensions run the span-rank computation; larger ones verify the unit
  /// structure entrywise, which is exact and O(n^4).
  void assert_full() const {
    const std::size_t n = algebra_dim;
    std::vector<CMatrix> products;
    products.reserve(n * n);
    for (std::size_t p = 0; p < n; ++p) {
      const CMatrix xp = CMatrix::unit(n, module_cols, p, 0);
      for (std::size_t r = 0; r < n; ++r) {
        const CMatrix xr = CMatrix::unit(n, module_cols, r, 0);
        products.push_back(matmul(xp, adjoint(xr)));
      }
    }
    if (n <= 12) {
      if (rank_span(products) != n * n)
        throw std::logic_error("ModuleSpace: canonical inner products do not span");
      return;
    }
    std::size_t idx = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = 0; r < n; ++r)
        if (!(products[idx++] == CMatrix::unit(n, n, p, r)))
          throw std::logic_error("ModuleSpace: canonical inner products do not span");
  }
};

struct ModuleElement {
  ModuleSpace space;
  CMatrix value; // n x k

  ModuleElement() = default;
  ModuleElement(ModuleSpace s, CMatrix v) : space(s), value(std::move(v)) {
    if (value.rows() != space.algebra_dim || value.cols() != space.module_cols)
      throw DimensionMismatch("ModuleElement: shape does not match space");
  }

  static ModuleElement zero(const ModuleSpace& s) {
    return ModuleElement(s, CMatrix(s.algebra_dim, s.module_cols));
  }
  static ModuleElement unit(const ModuleSpace& s, std::size_t p, std::size_t q) {
    return ModuleElement(s, CMatrix::unit(s.algebra_dim, s.module_cols, p, q));
  }
  static ModuleElement random(const ModuleSpace& s, Rng& rng) {
    return ModuleElement(s, rng.gaussian_matrix(s.algebra_dim, s.module_cols));
  }
};

inline ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
  if (x.space != y.space) throw SpaceMismatch("module add: different spaces");
  return ModuleElement(x.space, x.value + y.value);
}
inline ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
  if (x.space != y.space) throw SpaceMismatch("module sub: different spaces");
  return ModuleElement(x.space, x.value - y.value);
}
inline ModuleElement operator*(Complex s, const ModuleElement& x) {
  return ModuleElement(x.space, s * x.value);
}

/// <x, y> = x y*. A-linear in the first slot, conjugate linear in the second.
inline AlgebraElement inner_product(const ModuleElement& x,
                                    const ModuleElement& y) {
  if (x.space != y.space)
    throw SpaceMismatch("inner_product: elements from different spaces");
  return AlgebraElement(matmul(x.value, adjoint(y.value)));
}

/// Left action a.x = ax.
inline ModuleElement module_action(const AlgebraElement& a,
                                   const ModuleElement& x) {
  if (a.dim() != x.space.algebra_dim)
    throw DimensionMismatch("module_action: algebra dimension mismatch");
  return ModuleElement(x.space, matmul(a.value, x.value));
}

/// ||x|| = ||<x,x>||^{1/2}; equals the largest singular value of x.
inline double module_norm(const ModuleElement& x) {
  const CMatrix gram = matmul(x.value, adjoint(x.value));
  return std::sqrt(psd_max_eigenvalue(gram));
}

using InnerProductFn =
    std::function<AlgebraElement(const ModuleElement&, const ModuleElement&)>;

/// Random verification of the inner-product axioms. The inner product is a
/// parameter so corrupted products can be fed through the same checker.
inline CheckReport check_module_axioms(const ModuleSpace& space, int trials,
                                       std::uint64_t seed, double tol,
                                       const InnerProductFn& ip) {
  if (trials < 1)
    throw PreconditionViolated("check_module_axioms: trials must be >= 1");
  CheckReport report("module-axioms");
  const std::string path = "module-axioms/n" + num_str(space.algebra_dim) +
                           "k" + num_str(space.module_cols);
  Rng rng = case_stream(seed, path);

  struct Worst {
    double residual = 0.0;
    CMatrix x, y;
  };
  Worst first_slot, second_slot, action, conj_sym;
  double positivity_indicator = 0.0;
  CMatrix positivity_witness;

  for (int trial = 0; trial < trials; ++trial) {
    const ModuleElement x = ModuleElement::random(space, rng);
    const ModuleElement y = ModuleElement::random(space, rng);
    const ModuleElement z = ModuleElement::random(space, rng);
    const AlgebraElement a(rng.gaussian_matrix(space.algebra_dim, space.algebra_dim));
    const Complex alpha = rng.complex_gaussian();
    const double nx = module_norm(x), ny = module_norm(y), nz = module_norm(z);

    const double r1 =
        norm(ip(alpha * x + y, z) - (alpha * ip(x, z) + ip(y, z))) /
        (1.0 + (std::abs(alpha) * nx + ny) * nz);
    if (r1 > first_slot.residual) first_slot = {r1, x.value, z.value};

    const double r2 =
        norm(ip(x, alpha * y + z) -
             (std::conj(alpha) * ip(x, y) + ip(x, z))) /
        (1.0 + nx * (std::abs(alpha) * ny + nz));
    if (r2 > second_slot.residual) second_slot = {r2, x.value, y.value};

    const double r3 = norm(ip(module_action(a, x), y) - a * ip(x, y)) /
                      (1.0 + norm(a) * nx * ny);
    if (r3 > action.residual) action = {r3, x.value, y.value};

    const double r4 =
        norm(star(ip(x, y)) - ip(y, x)) / (1.0 + nx * ny);
    if (r4 > conj_sym.residual) conj_sym = {r4, x.value, y.value};

    if (!is_positive(ip(x, x), tol)) {
      positivity_indicator = 1.0;
      positivity_witness = x.value;
    }
  }

  const std::map<std::string, std::string> params{
      {"dim", num_str(space.algebra_dim)},
      {"cols", num_str(space.module_cols)},
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", path}};

  auto numeric_case = [&](const std::string& name, const Worst& w,
                          const char* first, const char* second) {
    CheckCase c;
    c.name = name;
    c.params = params;
    c.residual = w.residual;
    c.tolerance = tol;
    c.witness = {{first, w.x}, {second, w.y}};
    return c;
  };
  report.add(numeric_case("first-slot-linearity", first_slot, "x", "z"));
  report.add(numeric_case("second-slot-conjugate-linearity", second_slot, "x", "y"));
  report.add(numeric_case("action-compatibility", action, "x", "y"));
  report.add(numeric_case("conjugate-symmetry", conj_sym, "x", "y"));

  CheckCase pos;
  pos.name = "positivity";
  pos.params = params;
  pos.residual = positivity_indicator;
  pos.tolerance = 0.5;
  pos.witness = {{"x", positivity_witness}};
  report.add(pos);

  // ||x|| = 0 forces x = 0; exercised on the zero element, where both the
  // norm and the entries vanish exactly.
  const ModuleElement zero = ModuleElement::zero(space);
  CheckCase zn;
  zn.name = "zero-element-norm";
  zn.params = params;
  zn.residual = module_norm(zero) + zero.value.max_abs();
  zn.tolerance = tol;
  report.add(zn);

  return report;
}

inline CheckReport check_module_axioms(const ModuleSpace& space, int trials,
                                       std::uint64_t seed, double tol) {
  return check_module_axioms(space, trials, seed, tol, inner_product);
}

/// Full iff the canonical inner products of the module matrix units span M_n.
inline bool check_fullness(const ModuleSpace& space,
                           double tau_rank = kTolerances.rank) {
  const std::size_t n = space.algebra_dim;
  const std::size_t k = space.module_cols;
  std::vector<AlgebraElement> products;
  products.reserve(n * k * n * k);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < k; ++s)
          products.push_back(inner_product(ModuleElement::unit(space, p, q),
                                           ModuleElement::unit(space, r, s)));
  return detail::span_is_full(products, n, tau_rank);
}

/// max_j ||a . E_{j1}|| over the canonical column generators. Zero iff a = 0,
/// and always >= ||a|| / sqrt(n) (the quantitative annihilator bound).
inline double annihilator_defect(const AlgebraElement& a,
                                 const ModuleSpace& space) {
  if (a.dim() != space.algebra_dim)
    throw DimensionMismatch("annihilator_defect: algebra dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < space.algebra_dim; ++j) {
    const ModuleElement generator = ModuleElement::unit(space, j, 0);
    worst = std::max(worst, module_norm(module_action(a, generator)));
  }
  return worst;
}

} // namespace cstarflow
