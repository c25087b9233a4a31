#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/derivations.hpp"
#include "cstarflow/hilbert_module.hpp"
#include "cstarflow/morphisms.hpp"

namespace cstarflow {

/// One-parameter unitary flow alpha_t(x) = e^{itT} x on the module, with the
/// induced algebra flow alpha'_t(a) = e^{itT} a e^{-itT}. The generator's
/// eigendecomposition is computed once so every alpha_t shares the same
/// eigenbasis and the group law holds to roundoff.
struct DynamicalSystem {
  ModuleSpace space;
  CMatrix generator; // Hermitian n x n
  EigenDecomposition eig;
};

inline DynamicalSystem make_dynamical_system(const ModuleSpace& space,
                                             CMatrix generator) {
  if (generator.rows() != space.algebra_dim ||
      generator.cols() != space.algebra_dim)
    throw DimensionMismatch("make_dynamical_system: generator shape mismatch");
  if (!is_hermitian(generator))
    throw NotHermitian("make_dynamical_system: generator is not Hermitian");
  DynamicalSystem sys;
  sys.space = space;
  sys.eig = herm_eig(generator);
  sys.generator = std::move(generator);
  // Spot-check unitarity of the flow.
  for (double t : {1.0, 0.7853981633974483}) {
    const CMatrix u = expm_i_from(sys.eig, t);
    const double defect =
        op_norm(matmul(adjoint(u), u) - CMatrix::identity(u.rows()));
    if (defect > kTolerances.eig)
      throw std::logic_error("make_dynamical_system: flow is not unitary");
  }
  return sys;
}

inline CMatrix flow_unitary(const DynamicalSystem& sys, double t) {
  return expm_i_from(sys.eig, t);
}

/// alpha_t(x) = e^{itT} x.
inline ModuleElement evolve(const DynamicalSystem& sys, double t,
                            const ModuleElement& x) {
  if (x.space != sys.space)
    throw SpaceMismatch("evolve: element from another space");
  return ModuleElement(sys.space, matmul(flow_unitary(sys, t), x.value));
}

/// alpha'_t(a) = e^{itT} a e^{-itT}.
inline AlgebraElement induced_algebra_flow(const DynamicalSystem& sys, double t,
                                           const AlgebraElement& a) {
  if (a.dim() != sys.space.algebra_dim)
    throw DimensionMismatch("induced_algebra_flow: dimension mismatch");
  const CMatrix u = flow_unitary(sys, t);
  return AlgebraElement(matmul(matmul(u, a.value), adjoint(u)));
}

/// Group law alpha_{t+s} = alpha_t alpha_s on the module and the algebra,
/// with t, s drawn from [-10, 10].
inline CheckReport check_group_law(const DynamicalSystem& sys, int trials,
                                   std::uint64_t seed, double tol) {
  if (trials < 1)
    throw PreconditionViolated("check_group_law: trials must be >= 1");
  CheckReport report("group-law");
  const std::string path = "group-law";
  Rng rng = case_stream(seed, path);
  const std::size_t n = sys.space.algebra_dim;

  double worst_module = 0.0, worst_algebra = 0.0, worst_inverse = 0.0;
  CMatrix wm_x, wa_a;
  for (int trial = 0; trial < trials; ++trial) {
    const double t = rng.uniform(-10.0, 10.0);
    const double s = rng.uniform(-10.0, 10.0);
    const ModuleElement x = ModuleElement::random(sys.space, rng);
    const AlgebraElement a(rng.gaussian_matrix(n, n));
    const double nx = module_norm(x);
    const double na = norm(a);

    const double rm =
        module_norm(evolve(sys, t + s, x) - evolve(sys, t, evolve(sys, s, x))) /
        (nx > 0.0 ? nx : 1.0);
    if (rm > worst_module) {
      worst_module = rm;
      wm_x = x.value;
    }

    const double ra =
        norm(induced_algebra_flow(sys, t + s, a) -
             induced_algebra_flow(sys, t, induced_algebra_flow(sys, s, a))) /
        (na > 0.0 ? na : 1.0);
    if (ra > worst_algebra) {
      worst_algebra = ra;
      wa_a = a.value;
    }

    const double ri =
        module_norm(evolve(sys, t, evolve(sys, -t, x)) - x) /
        (nx > 0.0 ? nx : 1.0);
    worst_inverse = std::max(worst_inverse, ri);
  }

  const std::map<std::string, std::string> params{
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", path},
      {"dim", num_str(n)}};

  CheckCase cm;
  cm.name = "module-flow";
  cm.params = params;
  cm.residual = worst_module;
  cm.tolerance = tol;
  cm.witness = {{"x", wm_x}};
  report.add(cm);

  CheckCase ca;
  ca.name = "algebra-flow";
  ca.params = params;
  ca.residual = worst_algebra;
  ca.tolerance = tol;
  ca.witness = {{"a", wa_a}};
  report.add(ca);

  CheckCase ci;
  ci.name = "inverse";
  ci.params = params;
  ci.residual = worst_inverse;
  ci.tolerance = tol;
  report.add(ci);

  return report;
}

/// Strong continuity along a decreasing schedule of times. For a unitary
/// group with bounded generator the deviation obeys the exact bound
/// ||alpha_t x - x|| <= |t| ||T|| ||x|| (and 2|t| ||T|| ||a|| on the algebra
/// side), and shrinks monotonically as t decreases through the schedule.
inline CheckReport check_strong_continuity(const DynamicalSystem& sys,
                                           const ModuleElement& x,
                                           const AlgebraElement& a,
                                           const std::vector<double>& schedule) {
  if (schedule.empty())
    throw std::invalid_argument("check_strong_continuity: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1e-8)
      throw std::invalid_argument(
          "check_strong_continuity: schedule values must be >= 1e-8");
    if (i > 0 && schedule[i] >= schedule[i - 1])
      throw std::invalid_argument(
          "check_strong_continuity: schedule must be strictly decreasing");
  }

  CheckReport report("strong-continuity");
  const double tnorm = op_norm(sys.generator);
  const double nx = module_norm(x);
  const double na = norm(a);

  std::vector<double> module_dev, algebra_dev;
  module_dev.reserve(schedule.size());
  algebra_dev.reserve(schedule.size());
  for (double t : schedule) {
    module_dev.push_back(module_norm(evolve(sys, t, x) - x));
    algebra_dev.push_back(norm(induced_algebra_flow(sys, t, a) - a));
  }

  double bound_violation = 0.0, mono_violation = 0.0;
  double algebra_bound_violation = 0.0, algebra_mono_violation = 0.0;
  constexpr double kMonotoneSlack = 1e-12;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double t = schedule[i];
    bound_violation =
        std::max(bound_violation,
                 (module_dev[i] - t * tnorm * nx) / (nx > 0.0 ? nx : 1.0));
    algebra_bound_violation = std::max(
        algebra_bound_violation,
        (algebra_dev[i] - 2.0 * t * tnorm * na) / (na > 0.0 ? na : 1.0));
    if (i > 0) {
      mono_violation =
          std::max(mono_violation, module_dev[i] - module_dev[i - 1] -
                                       kMonotoneSlack * std::max(1.0, module_dev[i - 1]));
      algebra_mono_violation =
          std::max(algebra_mono_violation,
                   algebra_dev[i] - algebra_dev[i - 1] -
                       kMonotoneSlack * std::max(1.0, algebra_dev[i - 1]));
    }
  }

  std::map<std::string, std::string> params{
      {"schedule_len", num_str(schedule.size())},
      {"t_max", num_str(schedule.front())},
      {"t_min", num_str(schedule.back())},
      {"generator_norm", num_str(tnorm)}};

  auto violation_case = [&](const std::string& name, double violation) {
    CheckCase c;
    c.name = name;
    c.params = params;
    c.residual = std::max(0.0, violation);
    c.tolerance = 0.0;
    return c;
  };
  report.add(violation_case("module-flow-bound", bound_violation));
  report.add(violation_case("module-flow-monotone", mono_violation));
  report.add(violation_case("algebra-flow-bound", algebra_bound_violation));
  report.add(violation_case("algebra-flow-monotone", algebra_mono_violation));
  return report;
}

/// Central difference (alpha_h(x) - alpha_{-h}(x)) / (2h).
inline ModuleElement estimate_generator(const DynamicalSystem& sys,
                                        const ModuleElement& x, double h) {
  if (h <= 0.0)
    throw std::invalid_argument("estimate_generator: h must be positive");
  const ModuleElement forward = evolve(sys, h, x);
  const ModuleElement backward = evolve(sys, -h, x);
  return Complex(1.0 / (2.0 * h), 0.0) * (forward - backward);
}

/// delta(x) = iT x, the exact generator.
inline ModuleElement generator_exact(const DynamicalSystem& sys,
                                     const ModuleElement& x) {
  if (x.space != sys.space)
    throw SpaceMismatch("generator_exact: element from another space");
  return ModuleElement(sys.space,
                       Complex(0.0, 1.0) * matmul(sys.generator, x.value));
}

/// d(a) = i(Ta - aT), the exact generator of the induced algebra flow.
inline AlgebraElement algebra_generator_exact(const DynamicalSystem& sys,
                                              const AlgebraElement& a) {
  if (a.dim() != sys.space.algebra_dim)
    throw DimensionMismatch("algebra_generator_exact: dimension mismatch");
  return AlgebraElement(Complex(0.0, 1.0) *
                        (matmul(sys.generator, a.value) -
                         matmul(a.value, sys.generator)));
}

/// Central difference of the induced algebra flow at 0.
inline AlgebraElement estimate_algebra_generator(const DynamicalSystem& sys,
                                                 const AlgebraElement& a,
                                                 double h) {
  if (h <= 0.0)
    throw std::invalid_argument("estimate_algebra_generator: h must be positive");
  const AlgebraElement forward = induced_algebra_flow(sys, h, a);
  const AlgebraElement backward = induced_algebra_flow(sys, -h, a);
  return Complex(1.0 / (2.0 * h), 0.0) * (forward - backward);
}

/// The generator identity in two layers. Exact: the algebraic identity
/// iT(ax) = a(iTx) + i[T,a]x at roundoff. Numerical: the same identity with
/// both generators replaced by central differences at h = 1e-4. Finally the
/// commutator derivation of T is built and its Leibniz check absorbed,
/// tying the dynamics back to the derivation structure.
inline CheckReport check_theorem_4_3(const DynamicalSystem& sys, int trials,
                                     std::uint64_t seed, double tol_exact,
                                     double tol_fd = 1e-6) {
  if (trials < 1)
    throw PreconditionViolated("check_theorem_4_3: trials must be >= 1");
  CheckReport report("generator-leibniz");
  const std::string path = "generator-leibniz";
  Rng rng = case_stream(seed, path);
  const std::size_t n = sys.space.algebra_dim;
  const double tnorm = op_norm(sys.generator);
  constexpr double kStep = 1e-4;

  double worst_exact = 0.0, worst_fd = 0.0;
  CMatrix we_a, we_x, wf_a, wf_x;
  for (int trial = 0; trial < trials; ++trial) {
    const AlgebraElement a(rng.gaussian_matrix(n, n));
    const ModuleElement x = ModuleElement::random(sys.space, rng);
    const ModuleElement ax = module_action(a, x);
    const double scale = 1.0 + norm(a) * module_norm(x) * tnorm;

    const ModuleElement exact_lhs = generator_exact(sys, ax);
    const ModuleElement exact_rhs =
        module_action(a, generator_exact(sys, x)) +
        module_action(algebra_generator_exact(sys, a), x);
    const double re = module_norm(exact_lhs - exact_rhs) / scale;
    if (re > worst_exact) {
      worst_exact = re;
      we_a = a.value;
      we_x = x.value;
    }

    const ModuleElement fd_lhs = estimate_generator(sys, ax, kStep);
    const ModuleElement fd_rhs =
        module_action(a, estimate_generator(sys, x, kStep)) +
        module_action(estimate_algebra_generator(sys, a, kStep), x);
    const double rf = module_norm(fd_lhs - fd_rhs) / scale;
    if (rf > worst_fd) {
      worst_fd = rf;
      wf_a = a.value;
      wf_x = x.value;
    }
  }

  const std::map<std::string, std::string> params{
      {"trials", num_str(trials)},
      {"seed", num_str(seed)},
      {"seed_path", path},
      {"dim", num_str(n)},
      {"h", num_str(kStep)}};

  CheckCase exact;
  exact.name = "exact-layer";
  exact.params = params;
  exact.residual = worst_exact;
  exact.tolerance = tol_exact;
  exact.witness = {{"a", we_a}, {"x", we_x}};
  report.add(exact);

  CheckCase fd;
  fd.name = "numerical-layer";
  fd.params = params;
  fd.residual = worst_fd;
  fd.tolerance = tol_fd;
  fd.witness = {{"a", wf_a}, {"x", wf_x}};
  report.add(fd);

  const GeneralizedDerivation gd =
      commutator_derivation(sys.generator, sys.space);
  report.absorb(check_generalized_leibniz(gd, trials, seed, tol_exact),
                "derivation-link");
  return report;
}

struct ConvergenceLevel {
  double h;
  double error;
};

/// Errors of the central-difference generator estimate on a halving ladder.
inline std::vector<ConvergenceLevel> convergence_order(
    const DynamicalSystem& sys, const ModuleElement& x, double h0,
    int levels) {
  if (h0 <= 0.0)
    throw std::invalid_argument("convergence_order: h0 must be positive");
  if (levels < 2)
    throw std::invalid_argument("convergence_order: need at least 2 levels");
  const ModuleElement exact = generator_exact(sys, x);
  std::vector<ConvergenceLevel> ladder;
  ladder.reserve(levels);
  double h = h0;
  for (int level = 0; level < levels; ++level) {
    ladder.push_back({h, module_norm(estimate_generator(sys, x, h) - exact)});
    h *= 0.5;
  }
  return ladder;
}

/// Declared roundoff floor for the convergence ladder.
inline double convergence_floor(const DynamicalSystem& sys,
                                const ModuleElement& x) {
  const double tnorm = op_norm(sys.generator);
  return 100.0 * std::numeric_limits<double>::epsilon() * tnorm * tnorm *
         module_norm(x);
}

} // namespace cstarflow
