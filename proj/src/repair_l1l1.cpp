// SPDX-License-Identifier: Apache-2.0
#include "bpb/repair_l1l1.hpp"

#include <string>

#include "bpb/selection.hpp"
#include "repair_common.hpp"

namespace bpb {

namespace {

template <Scalar S>
std::vector<S> coefficients(const MeasureSpace<S>& space, const Density<S>& f) {
  std::vector<S> alpha(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) alpha[i] = space.weight(i) * f[i];
  return alpha;
}

template <Scalar S>
void require_nonnegative(const Density<S>& f, const char* op) {
  if (!is_nonnegative(f)) throw PreconditionError(std::string(op) + ": requires f ≥ 0");
}

}  // namespace

template <Scalar S>
DensityStep<S> normalize_density_step(const KernelMeasure<S>& T, const Density<S>& f0, const S& eps) {
  constexpr const char* op = "normalize_density_step";
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(T.domain(), f0, op);
  detail::require_unit_operator<S>(T, op);
  require_nonnegative(f0, op);
  detail::require_unit_vector(T.domain(), f0, op);

  const S eta = density_step_defect(eps);
  const S threshold = S(1) - eta;
  detail::require_gate(image_norm(T, f0), threshold, "‖Tf‖ > 1 − ε³/2⁶");

  const std::size_t n = T.domain().size();
  const std::vector<S> dens = marginal_density(T);
  const std::vector<S> alpha = coefficients(T.domain(), f0);
  const S r = S(1) - eps * eps / S(64);
  SelectionResult<S> sel = convex_series_select(alpha, dens, eta, r);

  const S d_level = S(1) - eps / S(8);
  AtomSet D;
  for (std::size_t i = 0; i < n; ++i)
    if (exceeds(dens[i], d_level)) D.push_back(i);

  // Each atom is its own B_j, so B̃_j = {j} ∩ D.
  const AtomSet J = sel.indices;
  for (std::size_t j : J)
    detail::ensure(contains(D, j), op + std::string(": selected atom ") + std::to_string(j) + " outside D");

  Density<S> f1 = Density<S>::zeros(n);
  for (std::size_t j : J) f1[j] = alpha[j] / sel.mass / T.domain().weight(j);

  Matrix<S> nu = T.mass();
  for (std::size_t j : J)
    for (auto& x : nu.row(j)) x /= dens[j];
  KernelMeasure<S> Tnu(T.domain(), T.codomain(), std::move(nu));

  DensityStep<S> out{Tnu, f1, threshold, operator_distance(T, Tnu), l1_distance(T.domain(), f0, f1), {}};
  out.steps.record_scalar("eta", eta);
  out.steps.record_scalar("r", r);
  out.steps.record_atoms("D", D);
  out.steps.record_atoms("J", J);
  out.steps.record_scalar("selected_mass", sel.mass);
  out.steps.record_atoms("B~", J);

  detail::ensure(equals(kernel_norm(Tnu), S(1)), std::string(op) + ": ‖T_ν‖ ≠ 1");
  const std::vector<S> new_dens = marginal_density(Tnu);
  for (std::size_t i : support_of(f1))
    detail::ensure(equals(new_dens[i], S(1)), std::string(op) + ": marginal density ≠ 1 at atom " + std::to_string(i));
  detail::ensure(is_nonnegative(f1) && is_unit(T.domain(), f1), std::string(op) + ": f₁ is not a nonnegative unit vector");
  detail::ensure(below(out.dist_operator, eps), std::string(op) + ": ‖T − T_ν‖ = " + to_string(out.dist_operator) + " ≥ ε");
  detail::ensure(below(out.dist_vector, S(3 * eps)),
                 std::string(op) + ": ‖f₁ − f₀‖₁ = " + to_string(out.dist_vector) + " ≥ 3ε");
  return out;
}

template <Scalar S>
AlignStep<S> align_mass_step(const KernelMeasure<S>& T, const Density<S>& f, const S& eps) {
  constexpr const char* op = "align_mass_step";
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(T.domain(), f, op);
  detail::require_unit_operator<S>(T, op);
  require_nonnegative(f, op);
  detail::require_unit_vector(T.domain(), f, op);
  const std::vector<S> dens = marginal_density(T);
  for (std::size_t i : support_of(f))
    if (!equals(dens[i], S(1)))
      throw PreconditionError(std::string(op) + ": requires marginal density 1 on supp f (atom " +
                              std::to_string(i) + " has " + to_string(dens[i]) + ")");

  const S eta = align_step_defect(eps);
  const S threshold = S(1) - eta;
  const Density<S> image = apply_l1l1(T, f);
  detail::require_gate(l1_norm(T.codomain(), image), threshold, "‖Tf‖ > 1 − ε⁶/2⁷");

  const std::size_t n = T.domain().size();
  const std::size_t m = T.codomain().size();
  std::vector<S> g(m);
  for (std::size_t y = 0; y < m; ++y) g[y] = S(sign_of(image[y]));

  std::vector<S> c(n, S(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t y = 0; y < m; ++y) c[i] += g[y] * T(i, y);
    c[i] /= T.domain().weight(i);
  }
  const S r = S(1) - power(eps, 3) / S(64);
  SelectionResult<S> sel = convex_series_select(coefficients(T.domain(), f), c, eta, r);
  const AtomSet J = sel.indices;

  // C = {(i,y) ∈ supp ν : |g(y)h(i,y) − 1| < √(ε/8)}.
  const S c_radius = eps / S(8);
  auto in_c = [&](std::size_t i, std::size_t y) {
    if (is_zero(T(i, y))) return false;
    return below_sqrt(abs_of(S(g[y] * S(sign_of(T(i, y))) - S(1))), c_radius);
  };

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < m; ++y)
      if (in_c(i, y)) cells.emplace_back(i, y);

  AlignStep<S> out{T, Density<S>{}, DualVector<S>{}, threshold, S(0), S(0), {}};
  out.steps.record_scalar("eta", eta);
  out.steps.record_scalar("r", r);
  out.steps.record_atoms("J", J);
  out.steps.record_scalar("selected_mass", sel.mass);
  out.steps.record_cells("C", cells);

  std::vector<S> cdens(n, S(0));
  AtomSet Bt;
  for (std::size_t j : J) {
    S fd(0);
    for (std::size_t y = 0; y < m; ++y) (in_c(j, y) ? cdens[j] : fd) += abs_of(T(j, y));
    fd /= T.domain().weight(j);
    cdens[j] /= T.domain().weight(j);
    if (!at_most(fd, eps / S(2)) || sign_of(cdens[j]) <= 0) {
      out.steps.record_atoms("B~", Bt);
      throw ConstructionFailure(std::string(op) + ": B̃ for atom " + std::to_string(j) +
                                " is empty (off-C density " + to_string(fd) + ", on-C density " +
                                to_string(cdens[j]) + ")");
    }
    Bt.push_back(j);
  }
  out.steps.record_atoms("B~", Bt);

  std::vector<S> gt(m);
  for (std::size_t y = 0; y < m; ++y) gt[y] = S(unit_sign(g[y]));

  Matrix<S> nu = T.mass();
  for (std::size_t j : Bt)
    for (std::size_t y = 0; y < m; ++y)
      nu(j, y) = in_c(j, y) ? S(gt[y] * abs_of(T(j, y)) / cdens[j]) : S(0);

  out.kernel = KernelMeasure<S>(T.domain(), T.codomain(), std::move(nu));
  out.f = restrict_normalize(T.domain(), f, Bt);
  out.witness = DualVector<S>(gt);
  out.dist_operator = operator_distance(T, out.kernel);
  out.dist_vector = l1_distance(T.domain(), f, out.f);

  detail::ensure(equals(kernel_norm(out.kernel), S(1)), std::string(op) + ": ‖T_ν̃‖ ≠ 1");
  const S value = pairing(out.kernel, out.f, out.witness);
  detail::ensure(equals(value, S(1)), std::string(op) + ": ⟨T_ν̃ f̃, g̃⟩ = " + to_string(value) + " ≠ 1");
  detail::ensure(below_sqrt(out.dist_operator, S(9 * eps)),
                 std::string(op) + ": ‖T_ν − T_ν̃‖ = " + to_string(out.dist_operator) + " ≥ 3√ε");
  detail::ensure(below(out.dist_vector, S(3 * eps)),
                 std::string(op) + ": ‖f − f̃‖₁ = " + to_string(out.dist_vector) + " ≥ 3ε");
  return out;
}

template <Scalar S>
L1Report<S> repair_l1l1(const KernelMeasure<S>& T, const Density<S>& f, const S& eps) {
  constexpr const char* op = "repair_l1l1";
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(T.domain(), f, op);
  detail::require_unit_operator<S>(T, op);
  detail::require_unit_vector(T.domain(), f, op);

  const S eta = l1l1_defect(eps);
  const S threshold = S(1) - eta;
  const S measured = image_norm(T, f);
  detail::require_gate(measured, threshold, "‖Tf‖ > 1 − ε¹⁸/(5³·2²⁷)");

  const SignSplit<S> split = sign_normalize(f);
  const KernelMeasure<S> Tp = conjugate(T, split.signs);
  const S eps1 = power(eps, 6) / S(640);

  StepLog steps;
  steps.record_scalar("eps1", eps1);
  std::vector<std::size_t> flipped;
  for (std::size_t i = 0; i < split.signs.size(); ++i)
    if (split.signs[i] < 0) flipped.push_back(i);
  steps.record_atoms("sign_flips", flipped);

  // The inner gates follow from the outer one; a failure here is a bug.
  auto inner = [&](auto&& run, const char* stage) {
    try {
      return run();
    } catch (const PreconditionError& e) {
      throw InvariantViolation(std::string(op) + ": " + stage + " rejected a chained input: " + e.what());
    }
  };

  DensityStep<S> d = inner([&] { return normalize_density_step(Tp, split.magnitude, eps1); }, "density step");
  steps.append(d.steps, "density");

  const S chained = image_norm(d.kernel, d.f);
  steps.record_scalar("chained_norm", chained);
  detail::ensure(at_most(S(measured - 4 * eps1), chained),
                 std::string(op) + ": ‖T_ν f₁‖ = " + to_string(chained) + " < ‖Tf‖ − 4ε₁");

  AlignStep<S> a = inner([&] { return align_mass_step(d.kernel, d.f, eps); }, "align step");
  steps.append(a.steps, "align");

  KernelMeasure<S> Sop = conjugate(a.kernel, split.signs);
  Density<S> g = split.signs.apply(a.f);
  Witness<S> witness{a.witness, std::nullopt, std::nullopt, pairing(Sop, g, a.witness)};

  L1Report<S> out{Law::l1l1, g, Sop, witness, l1_distance(T.domain(), f, g), operator_distance(T, Sop),
                  eps, threshold, std::move(steps)};

  detail::ensure(equals(kernel_norm(out.op), S(1)), std::string(op) + ": ‖S‖ ≠ 1");
  detail::ensure(is_unit(T.domain(), out.g), std::string(op) + ": ‖g‖₁ ≠ 1");
  detail::ensure(equals(image_norm(out.op, out.g), S(1)), std::string(op) + ": ‖Sg‖ ≠ 1");
  detail::ensure(equals(out.witness.value, S(1)), std::string(op) + ": ⟨Sg, g̃⟩ ≠ 1");
  detail::ensure(below(out.dist_vector, S(4 * eps)),
                 std::string(op) + ": ‖f − g‖₁ = " + to_string(out.dist_vector) + " ≥ 4ε");
  detail::ensure(below_sqrt(out.dist_operator, S(16 * eps)),
                 std::string(op) + ": ‖T − S‖ = " + to_string(out.dist_operator) + " ≥ 4√ε");
  return out;
}

#define BPB_INSTANTIATE_L1L1(S)                                                                         \
  template DensityStep<S> normalize_density_step(const KernelMeasure<S>&, const Density<S>&, const S&); \
  template AlignStep<S> align_mass_step(const KernelMeasure<S>&, const Density<S>&, const S&);          \
  template L1Report<S> repair_l1l1(const KernelMeasure<S>&, const Density<S>&, const S&);

BPB_INSTANTIATE_L1L1(Rational)
BPB_INSTANTIATE_L1L1(double)

}  // namespace bpb
