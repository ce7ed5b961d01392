// SPDX-License-Identifier: Apache-2.0
#include "bpb/repair_l1linf.hpp"

#include <algorithm>
#include <string>

#include "bpb/selection.hpp"
#include "repair_common.hpp"

namespace bpb {

CellSet CellSet::full(std::size_t rows, std::size_t cols) {
  CellSet out(rows, cols);
  std::fill(out.member_.begin(), out.member_.end(), 1);
  return out;
}

CellSet CellSet::from_cells(std::size_t rows, std::size_t cols, const std::vector<Cell>& cells) {
  CellSet out(rows, cols);
  for (const auto& [w, t] : cells) out.insert(w, t);
  return out;
}

void CellSet::insert(std::size_t w, std::size_t t) {
  if (w >= rows_ || t >= cols_)
    throw IndexError("cell (" + std::to_string(w) + "," + std::to_string(t) + ") outside " + std::to_string(rows_) +
                     "x" + std::to_string(cols_));
  member_[w * cols_ + t] = 1;
}

std::vector<Cell> CellSet::cells() const {
  std::vector<Cell> out;
  for (std::size_t w = 0; w < rows_; ++w)
    for (std::size_t t = 0; t < cols_; ++t)
      if (contains(w, t)) out.emplace_back(w, t);
  return out;
}

std::size_t CellSet::count() const { return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1)); }

template <Scalar S>
SupKernel<S> indicator_kernel(const MeasureSpace<S>& domain, const CellSet& M) {
  if (M.rows() != domain.size()) throw AlignmentError("cell set rows do not match the domain");
  Matrix<S> h(M.rows(), M.cols());
  for (std::size_t w = 0; w < M.rows(); ++w)
    for (std::size_t t = 0; t < M.cols(); ++t)
      if (M.contains(w, t)) h(w, t) = S(1);
  return SupKernel<S>(domain, std::move(h));
}

template <Scalar S>
AttainmentSetWitness<S> density_point_attain(const MeasureSpace<S>& space, const CellSet& M, const Density<S>& f0,
                                             const S& eps) {
  constexpr const char* op = "density_point_attain";
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(space, f0, op);
  if (M.rows() != space.size()) throw AlignmentError(std::string(op) + ": cell set rows do not match the domain");
  if (!is_nonnegative(f0)) throw PreconditionError(std::string(op) + ": requires f₀ ≥ 0");
  detail::require_unit_vector(space, f0, op);

  // score(y) = Σⱼ αⱼ μ(H_j^y)/μ(A_j) = (χ̂_M f₀)(y) with one atom per A_j.
  const std::vector<S> score = apply_l1linf(indicator_kernel(space, M), f0);
  const std::size_t y0 = argmax_abs(score);
  detail::require_gate(score[y0], S(S(1) - eps), "‖χ̂_M f₀‖ > 1 − ε");

  const std::size_t n = space.size();
  std::vector<S> alpha(n), c(n);
  for (std::size_t j = 0; j < n; ++j) {
    alpha[j] = space.weight(j) * f0[j];
    c[j] = M.contains(j, y0) ? S(1) : S(0);
  }
  // r = 1 − u with u ≥ √ε rational; c is an indicator, so J does not depend on u.
  S u = sqrt_upper(eps);
  if (!(u < S(1))) u = (S(1) + eps) / S(2);
  SelectionResult<S> sel = convex_series_select(alpha, c, eps, S(S(1) - u));

  AttainmentSetWitness<S> out{Density<S>{}, y0, {}, {}, {}};
  for (std::size_t j : sel.indices) {
    if (sign_of(alpha[j]) <= 0) continue;
    out.J.push_back(j);
    out.H_sets.push_back(AtomSet{j});
  }
  out.g0 = restrict_normalize(space, f0, out.J);

  out.steps.record("y0", std::to_string(y0));
  out.steps.record_scalar("score", score[y0]);
  out.steps.record_atoms("J", out.J);
  out.steps.record_scalar("selected_mass", sel.mass);

  const S dist = l1_distance(space, f0, out.g0);
  detail::ensure(below_sqrt(dist, S(16 * eps)), std::string(op) + ": ‖f₀ − g₀‖₁ = " + to_string(dist) + " ≥ 4√ε");
  S hit(0);
  for (std::size_t w = 0; w < n; ++w)
    if (M.contains(w, y0)) hit += space.weight(w) * out.g0[w];
  detail::ensure(equals(hit, S(1)), std::string(op) + ": (χ̂_M g₀)(y₀) = " + to_string(hit) + " ≠ 1");
  return out;
}

template <Scalar S>
SupReport<S> repair_l1linf(const SupKernel<S>& T, const Density<S>& f, const S& eps) {
  constexpr const char* op = "repair_l1linf";
  detail::require_open_interval(eps, S(S(1) / S(3)), op, "1/3");
  require_aligned(T.domain(), f, op);
  detail::require_unit_operator<S>(T, op);
  detail::require_unit_vector(T.domain(), f, op);

  const S eta = l1linf_defect(eps);
  const S threshold = S(1) - eta;
  detail::require_gate(image_norm(T, f), threshold, "‖Tf‖ > 1 − ε⁸");

  const SignSplit<S> split = sign_normalize(f);
  const SupKernel<S> Tp = conjugate(T, split.signs);
  const Density<S>& fp = split.magnitude;
  const std::size_t n = T.domain().size();
  const std::size_t k = T.codomain_atoms();

  const std::vector<S> image = apply_l1linf(Tp, fp);
  const std::size_t tstar = argmax_abs(image);
  const int sigma = unit_sign(image[tstar]);
  const S sg(sigma);

  StepLog steps;
  std::vector<std::size_t> flipped;
  for (std::size_t i = 0; i < n; ++i)
    if (split.signs[i] < 0) flipped.push_back(i);
  steps.record_atoms("sign_flips", flipped);
  steps.record("t*", std::to_string(tstar));
  steps.record("theta_sign", std::to_string(sigma));

  std::vector<S> alpha(n), c(n);
  for (std::size_t j = 0; j < n; ++j) {
    alpha[j] = T.domain().weight(j) * fp[j];
    c[j] = sg * Tp(j, tstar);
  }
  const S eps2 = eps * eps;
  const S eps4 = eps2 * eps2;
  SelectionResult<S> sel = convex_series_select(alpha, c, eta, S(S(1) - eps4));
  steps.record_atoms("J", sel.indices);
  steps.record_scalar("selected_mass", sel.mass);
  const Density<S> f1 = restrict_normalize(T.domain(), fp, sel.indices);
  const S d01 = l1_distance(T.domain(), fp, f1);
  detail::ensure(below(d01, S(2 * eps4)), std::string(op) + ": ‖f₀ − f₁‖₁ = " + to_string(d01) + " ≥ 2ε⁴");

  const S level = S(1) - eps2 / S(2);
  CellSet D(n, k);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 0; t < k; ++t)
      if (exceeds(S(sg * Tp(w, t)), level)) D.insert(w, t);
  steps.record_cells("L", D.cells());

  const S eps_inner = S(3) * eps2;
  const std::vector<S> on_d = apply_l1linf(indicator_kernel(T.domain(), D), f1);
  detail::ensure(exceeds(on_d[tstar], S(S(1) - eps_inner)),
                 std::string(op) + ": (χ̂_D f₁)(t*) = " + to_string(on_d[tstar]) + " not above 1 − 3ε²");

  AttainmentSetWitness<S> att = [&] {
    try {
      return density_point_attain(T.domain(), D, f1, eps_inner);
    } catch (const PreconditionError& e) {
      throw InvariantViolation(std::string(op) + ": attainment step rejected a chained input: " + e.what());
    }
  }();
  steps.append(att.steps, "attain");

  Matrix<S> h1 = Tp.values();
  for (const auto& [w, t] : D.cells()) h1(w, t) = sg;
  SupKernel<S> Sop = conjugate(SupKernel<S>(T.domain(), std::move(h1), T.codomain()), split.signs);
  Density<S> g = split.signs.apply(att.g0);

  const std::vector<S> sg_image = apply_l1linf(Sop, g);
  Witness<S> witness{std::nullopt, att.y0, std::nullopt, sg_image[att.y0]};
  SupReport<S> out{Law::l1linf, g, Sop, witness, l1_distance(T.domain(), f, g), operator_distance(T, Sop),
                   eps, threshold, std::move(steps)};

  detail::ensure(equals(sup_norm(out.op), S(1)), std::string(op) + ": ‖S‖ ≠ 1");
  detail::ensure(is_unit(T.domain(), out.g), std::string(op) + ": ‖g‖₁ ≠ 1");
  detail::ensure(equals(abs_of(witness.value), S(1)),
                 std::string(op) + ": |(Sg)(y₀)| = " + to_string(abs_of(witness.value)) + " ≠ 1");
  detail::ensure(below(out.dist_operator, S(2 * eps)),
                 std::string(op) + ": ‖T − S‖ = " + to_string(out.dist_operator) + " ≥ 2ε");
  detail::ensure(below(out.dist_vector, S(10 * eps)),
                 std::string(op) + ": ‖f − g‖₁ = " + to_string(out.dist_vector) + " ≥ 10ε");
  return out;
}

#define BPB_INSTANTIATE_L1LINF(S)                                                                          \
  template SupKernel<S> indicator_kernel(const MeasureSpace<S>&, const CellSet&);                          \
  template AttainmentSetWitness<S> density_point_attain(const MeasureSpace<S>&, const CellSet&,            \
                                                        const Density<S>&, const S&);                      \
  template SupReport<S> repair_l1linf(const SupKernel<S>&, const Density<S>&, const S&);

BPB_INSTANTIATE_L1LINF(Rational)
BPB_INSTANTIATE_L1LINF(double)

}  // namespace bpb
