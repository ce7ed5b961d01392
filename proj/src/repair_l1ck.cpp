// SPDX-License-Identifier: Apache-2.0
#include "bpb/repair_l1ck.hpp"

#include <string>

#include "repair_common.hpp"

namespace bpb {

template <Scalar S>
SupKernel<S> clamp_kernel(const SupKernel<S>& T, const S& level) {
  if (sign_of(level) < 0) throw PreconditionError("clamp_kernel: requires level ≥ 0");
  Matrix<S> h = T.values();
  const S low = -level;
  for (std::size_t w = 0; w < h.rows(); ++w)
    for (auto& x : h.row(w)) {
      if (x > level) x = level;
      else if (x < low) x = low;
    }
  return SupKernel<S>(T.domain(), std::move(h), T.codomain());
}

template <Scalar S>
Envelopes<S> envelopes(const SupKernel<S>& T, const AtomSet& A) {
  if (A.empty()) throw PreconditionError("envelopes: empty atom set");
  const std::size_t k = T.codomain_atoms();
  Envelopes<S> out{std::vector<S>(k), std::vector<S>(k)};
  for (std::size_t s = 0; s < k; ++s) {
    out.lower[s] = out.upper[s] = T(A.front(), s);
    for (std::size_t w : A) {
      if (w >= T.domain().size()) throw IndexError("envelopes: atom " + std::to_string(w) + " out of range");
      if (T(w, s) < out.lower[s]) out.lower[s] = T(w, s);
      if (T(w, s) > out.upper[s]) out.upper[s] = T(w, s);
    }
  }
  return out;
}

namespace {

template <Scalar S>
void check_sup_preconditions(const SupKernel<S>& T, const Density<S>& f, const S& eps, const char* op) {
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(T.domain(), f, op);
  detail::require_unit_operator<S>(T, op);
  detail::require_unit_vector(T.domain(), f, op);
}

template <Scalar S>
Density<S> restrict_or_fail(const MeasureSpace<S>& space, const Density<S>& f, const AtomSet& atoms,
                            const char* op, const char* name) {
  try {
    return restrict_normalize(space, f, atoms);
  } catch (const DegenerateRestriction&) {
    throw InvariantViolation(std::string(op) + ": f has no mass on " + name);
  }
}

template <Scalar S>
void check_sup_result(const SupReport<S>& out, const char* op) {
  detail::ensure(equals(sup_norm(out.op), S(1)), std::string(op) + ": ‖S‖ ≠ 1");
  detail::ensure(is_unit(out.op.domain(), out.g), std::string(op) + ": ‖g‖₁ ≠ 1");
  detail::ensure(equals(abs_of(out.witness.value), S(1)),
                 std::string(op) + ": |(Sg)(s₀)| = " + to_string(out.witness.value) + " ≠ 1");
  detail::ensure(below(out.dist_operator, out.epsilon),
                 std::string(op) + ": ‖S − T‖ = " + to_string(out.dist_operator) + " ≥ ε");
  detail::ensure(below(out.dist_vector, out.epsilon),
                 std::string(op) + ": ‖f − g‖₁ = " + to_string(out.dist_vector) + " ≥ ε");
}

}  // namespace

template <Scalar S>
SupReport<S> clamp_repair(const SupKernel<S>& T, const Density<S>& f, const S& eps) {
  constexpr const char* op = "clamp_repair";
  check_sup_preconditions(T, f, eps, op);
  const S threshold = S(1) - clamp_defect(eps);
  const std::vector<S> image = apply_l1linf(T, f);
  detail::require_gate(max_abs(image), threshold, "‖Tf‖ > 1 − ε²/6");

  const std::size_t s0 = argmax_abs(image);
  const int sigma = unit_sign(image[s0]);
  const ClampParams<S> params{S(1) - eps / S(3)};

  const SupKernel<S> clamped = clamp_kernel(T, params.level);
  const S clamped_norm = sup_norm(clamped);
  detail::ensure(equals(clamped_norm, params.level),
                 std::string(op) + ": ‖G(T)‖ = " + to_string(clamped_norm) + " ≠ 1 − ε/3");
  SupKernel<S> Sop = scale(clamped, S(S(1) / clamped_norm));

  AtomSet C;
  for (std::size_t w = 0; w < T.domain().size(); ++w)
    if (exceeds(S(S(sigma * unit_sign(f[w])) * T(w, s0)), params.level)) C.push_back(w);
  Density<S> g = restrict_or_fail(T.domain(), f, C, op, "C");

  const std::vector<S> sg = apply_l1linf(Sop, g);
  Witness<S> witness{std::nullopt, s0, std::nullopt, sg[s0]};
  SupReport<S> out{Law::ck_clamp, g, Sop, witness, l1_distance(T.domain(), f, g), operator_distance(T, Sop),
                   eps, threshold, {}};
  out.steps.record("s0", std::to_string(s0));
  out.steps.record("theta_sign", std::to_string(sigma));
  out.steps.record_scalar("level", params.level);
  out.steps.record_atoms("C", C);

  check_sup_result(out, op);
  detail::ensure(equals(out.witness.value, S(sigma)), std::string(op) + ": (Sg)(s₀) has the wrong sign");
  return out;
}

template <Scalar S>
SupReport<S> bump_repair(const SupKernel<S>& T, const Density<S>& f, const S& eps) {
  constexpr const char* op = "bump_repair";
  check_sup_preconditions(T, f, eps, op);
  const S threshold = S(1) - bump_defect(eps);
  detail::require_gate(image_norm(T, f), threshold, "‖Tf‖ > 1 − ε²/4");

  const SignSplit<S> split = sign_normalize(f);
  const SupKernel<S> Tp = conjugate(T, split.signs);
  const std::vector<S> image = apply_l1linf(Tp, split.magnitude);
  const std::size_t s0 = argmax_abs(image);
  const int sigma = unit_sign(image[s0]);
  // Work with σT', whose value at s₀ is positive.
  const SupKernel<S> Tpos = scale(Tp, S(sigma));

  BumpParams<S> params{S(1) - S(5) * eps / S(8), s0, {}};
  for (std::size_t w = 0; w < T.domain().size(); ++w)
    if (exceeds(Tpos(w, s0), params.q)) params.A.push_back(w);

  StepLog steps;
  steps.record("s0", std::to_string(s0));
  steps.record("theta_sign", std::to_string(sigma));
  steps.record_scalar("q", params.q);
  steps.record_atoms("A", params.A);

  detail::ensure(!params.A.empty(), std::string(op) + ": A is empty");
  const S mass = mass_on(T.domain(), split.magnitude, params.A);
  detail::ensure(exceeds(mass, S(S(1) - eps / S(2))),
                 std::string(op) + ": mass of f on A = " + to_string(mass) + " not above 1 − ε/2");
  const Envelopes<S> env = envelopes(Tpos, params.A);
  steps.record_scalar("u(s0)", env.lower[s0]);
  steps.record_scalar("v(s0)", env.upper[s0]);
  detail::ensure(exceeds(env.lower[s0], params.q) && exceeds(env.lower[s0], S(S(1) - eps)),
                 std::string(op) + ": u(s₀) = " + to_string(env.lower[s0]) + " not above q");

  // M(s)(ω) = T*δ_s(ω) + χ_A(ω)·[s = s₀]·(1 − T*δ_s(ω)).
  Matrix<S> m = Tpos.values();
  for (std::size_t w : params.A) m(w, s0) = S(1);
  SupKernel<S> Sop = conjugate(scale(SupKernel<S>(T.domain(), std::move(m), T.codomain()), S(sigma)), split.signs);
  Density<S> g = split.signs.apply(restrict_or_fail(T.domain(), split.magnitude, params.A, op, "A"));

  const std::vector<S> sg = apply_l1linf(Sop, g);
  Witness<S> witness{std::nullopt, s0, std::nullopt, sg[s0]};
  SupReport<S> out{Law::ck_bump, g, Sop, witness, l1_distance(T.domain(), f, g), operator_distance(T, Sop),
                   eps, threshold, std::move(steps)};

  check_sup_result(out, op);
  detail::ensure(equals(out.witness.value, S(sigma)), std::string(op) + ": (Sg)(s₀) has the wrong sign");
  return out;
}

#define BPB_INSTANTIATE_L1CK(S)                                                            \
  template SupKernel<S> clamp_kernel(const SupKernel<S>&, const S&);                       \
  template Envelopes<S> envelopes(const SupKernel<S>&, const AtomSet&);                    \
  template SupReport<S> clamp_repair(const SupKernel<S>&, const Density<S>&, const S&);    \
  template SupReport<S> bump_repair(const SupKernel<S>&, const Density<S>&, const S&);

BPB_INSTANTIATE_L1CK(Rational)
BPB_INSTANTIATE_L1CK(double)

}  // namespace bpb
