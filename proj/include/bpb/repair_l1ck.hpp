// SPDX-License-Identifier: Apache-2.0
//
// Repairs for real operators L1(μ) → C(K) with K finite, given by the
// columns F(s) = T*δ_s of a SupKernel.
//
// clamp_repair truncates every entry to [−1+ε/3, 1−ε/3] and renormalizes.
// bump_repair raises the maximizing column to ±1 on the atoms where it is
// already above q = 1 − 5ε/8 and leaves every other column alone.
//
// For a finite K both continuity conditions on s ↦ T*δ_s hold trivially, so
// the two repairs apply to every kernel. When Tf(s₀) < 0 the attained value
// is (Sg)(s₀) = −1; the witness records the sign.
#pragma once

#include <vector>

#include "bpb/report.hpp"

namespace bpb {

template <Scalar S>
struct ClampParams {
  S level;  // 1 − ε/3
};

template <Scalar S>
struct BumpParams {
  S q;  // 1 − 5ε/8
  std::size_t s0;
  AtomSet A;
};

// Entrywise median(h, −level, level).
template <Scalar S>
SupKernel<S> clamp_kernel(const SupKernel<S>& T, const S& level);

// u(s) = min over A of h(·,s) and v(s) = max over A, for every column s.
template <Scalar S>
struct Envelopes {
  std::vector<S> lower;
  std::vector<S> upper;
};

template <Scalar S>
Envelopes<S> envelopes(const SupKernel<S>& T, const AtomSet& A);

template <Scalar S>
S clamp_defect(const S& eps) {
  return eps * eps / S(6);
}
template <Scalar S>
S bump_defect(const S& eps) {
  return eps * eps / S(4);
}

// Requires ‖T‖ = 1, ‖f‖₁ = 1, ε ∈ (0,1) and ‖Tf‖ > 1 − ε²/6.
template <Scalar S>
SupReport<S> clamp_repair(const SupKernel<S>& T, const Density<S>& f, const S& eps);

// Requires ‖T‖ = 1, ‖f‖₁ = 1, ε ∈ (0,1) and ‖Tf‖ > 1 − ε²/4.
template <Scalar S>
SupReport<S> bump_repair(const SupKernel<S>& T, const Density<S>& f, const S& eps);

}  // namespace bpb
