// SPDX-License-Identifier: Apache-2.0
//
// Repair of near-attaining pairs (f, T) for operators L1(m₁) → L1(m₂).
//
// The pipeline runs in three stages on kernel measures:
//   1. normalize_density_step: drop atoms of f where the marginal density of
//      ν is not close to 1 and rescale the remaining rows to density exactly 1.
//   2. align_mass_step: fix the norming functional g = sign(Tf), drop the part
//      of each row whose sign disagrees with g, and renormalize what is left.
//   3. repair_l1l1: conjugate by the sign isometry so that f ≥ 0, run the two
//      steps with ε₁ = ε⁶/(5·2⁷) and ε, and conjugate back.
// Every step checks its own postconditions and throws InvariantViolation if
// one fails.
#pragma once

#include "bpb/report.hpp"

namespace bpb {

template <Scalar S>
struct DensityStep {
  KernelMeasure<S> kernel;  // T_ν
  Density<S> f;             // f₁
  S threshold;              // 1 − ε³/2⁶
  S dist_operator;          // ‖T − T_ν‖
  S dist_vector;            // ‖f₀ − f₁‖₁
  StepLog steps;
};

template <Scalar S>
struct AlignStep {
  KernelMeasure<S> kernel;  // T_ν̃
  Density<S> f;             // f̃
  DualVector<S> witness;    // g̃ with ⟨T_ν̃ f̃, g̃⟩ = 1
  S threshold;              // 1 − ε⁶/2⁷
  S dist_operator;          // ‖T_ν − T_ν̃‖
  S dist_vector;            // ‖f − f̃‖₁
  StepLog steps;
};

// Gate defects η such that the operations require ‖Tf‖ > 1 − η.
template <Scalar S>
S density_step_defect(const S& eps) {
  return power(eps, 3) / S(64);
}
template <Scalar S>
S align_step_defect(const S& eps) {
  return power(eps, 6) / S(128);
}
template <Scalar S>
S l1l1_defect(const S& eps) {
  return power(eps, 18) / scalar_cast<S>(Rational(mpz_class("16777216000")));  // 5³·2²⁷
}

// Requires ‖T‖ = 1, f₀ ≥ 0 with ‖f₀‖₁ = 1, ε ∈ (0,1) and ‖Tf₀‖ > 1 − ε³/2⁶.
// Returns T_ν with marginal density 1 on supp f₁, ‖T − T_ν‖ < ε and
// ‖f₁ − f₀‖₁ < 3ε.
template <Scalar S>
DensityStep<S> normalize_density_step(const KernelMeasure<S>& T, const Density<S>& f0, const S& eps);

// Requires ‖T_ν‖ = 1, f ≥ 0 unit, marginal density 1 on supp f, ε ∈ (0,1) and
// ‖T_ν f‖ > 1 − ε⁶/2⁷. Returns an attaining pair with ‖T_ν − T_ν̃‖ < 3√ε and
// ‖f − f̃‖₁ < 3ε.
template <Scalar S>
AlignStep<S> align_mass_step(const KernelMeasure<S>& T, const Density<S>& f, const S& eps);

// Requires ‖T‖ = 1, ‖f‖₁ = 1, ε ∈ (0,1) and ‖Tf‖ > 1 − ε¹⁸/(5³·2²⁷).
// Returns (g, S) with ‖S‖ = ‖Sg‖ = 1, ‖f − g‖₁ < 4ε and ‖T − S‖ < 4√ε.
template <Scalar S>
L1Report<S> repair_l1l1(const KernelMeasure<S>& T, const Density<S>& f, const S& eps);

}  // namespace bpb
