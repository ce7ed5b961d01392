// SPDX-License-Identifier: Apache-2.0
//
// Brute-force checks that do not reuse the closed-form norm formulas:
// operator norms over the extreme points ±δᵢ/μ(i) of the unit ball,
// attainment certificates, two-sided estimates of the distance to the set Π
// of attaining pairs, and sampled estimates of the modulus
// η(ε) = inf{1 − ‖Tf‖ : dist((f,T), Π) ≥ ε}.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpb/combinators.hpp"
#include "bpb/repair_l1linf.hpp"

namespace bpb {

template <Scalar S>
S brute_norm(const KernelMeasure<S>& T);
template <Scalar S>
S brute_norm(const SupKernel<S>& T);
template <Scalar S>
S brute_norm(const SumOperator<S>& T);

template <Scalar S>
struct PiCertificate {
  bool attained;
  Density<S> witness_vector;
  std::optional<DualVector<S>> witness_functional;  // L1 targets: sign(Sg)
  std::optional<std::size_t> witness_atom;          // sup targets: argmax |Sg|
  std::optional<std::size_t> witness_component;     // ℓ∞-sums
  S norm_vector;                                    // ‖g‖₁
  S norm_operator;                                  // ‖S‖ over extreme points
  S norm_image;                                     // ‖Sg‖
  S residual;                                       // max of |‖g‖−1|, |‖S‖−1|, |‖Sg‖−1|
};

template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const KernelMeasure<S>& op);
template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const SupKernel<S>& op);
template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const SumOperator<S>& op);

// Upper bound on dist((f,T), Π): the best max(‖f−g‖₁, ‖T−S‖) over a set of
// explicitly built attaining pairs. Candidates are the repair pipelines at a
// ladder of ε values (plus `extra_eps`), and
//  - kernels: for atom sets I, g = f restricted to I and renormalized, and S
//    keeps only the entries of the rows in I that agree with sign(Tg),
//    rescaled to density 1. I starts from supp f, all atoms and single
//    atoms, then a seeded search toggles one atom per iteration;
//  - sup kernels: every column t and sign σ, with I a prefix of supp f ordered
//    by |h(i,t) − σ·sign f(i)| and S(i,t) set to σ·sign f(i) on I.
// Nonincreasing in `budget` for a fixed seed.
template <Scalar S>
S dist_to_pi(const Density<S>& f, const KernelMeasure<S>& T, std::size_t budget, std::uint64_t seed,
             const std::vector<S>& extra_eps = {});
template <Scalar S>
S dist_to_pi(const Density<S>& f, const SupKernel<S>& T, std::size_t budget, std::uint64_t seed,
             const std::vector<S>& extra_eps = {});

// Lower bound on dist((f,T), Π): (1 − ‖Tf‖)/2, and the support argument
// for each kind (an attaining S has density 1, resp. a ±1 column, on supp g,
// and ‖f − g‖₁ is at least twice the mass of f off supp g). For sup kernels
// the column scan is exact, so the two bounds coincide there.
template <Scalar S>
S dist_to_pi_lower(const Density<S>& f, const KernelMeasure<S>& T);
template <Scalar S>
S dist_to_pi_lower(const Density<S>& f, const SupKernel<S>& T);

struct UniversalityResult {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

// Enumerates every φ with values in {−1,0,1} off M and 0 on M, and checks
// ‖(χ_M + φ)g₀‖∞ = 1. Requires at most 12 cells outside M.
template <Scalar S>
UniversalityResult check_attainment_universality(const MeasureSpace<S>& space, const CellSet& M,
                                                 const Density<S>& g0);

// The lower bound on η(ε) each repair proves.
template <Scalar S>
S proven_bound(Law law, const S& eps);

struct ModulusSample {
  std::size_t index;
  std::string defect;    // 1 − ‖Tf‖
  std::string est_dist;  // upper bound on the distance to Π
  std::string est_lower;
  bool accepted;         // est_dist ≥ ε
};

template <Scalar S>
struct ModulusEstimate {
  S epsilon;
  std::size_t samples;
  std::size_t accepted;
  std::size_t certified_far;  // accepted samples whose lower bound is also ≥ ε
  std::optional<S> min_defect;
  S proven_bound;
  std::vector<ModulusSample> rows;
};

// Samples `samples` pairs of the family's spaces (half uniformly random, half
// attaining pairs perturbed by 2⁻ᵏ with k in [1,120]), keeps those whose
// estimated distance to Π is at least ε and reports the least defect.
// Samples are evaluated in parallel and merged in index order.
template <Scalar S>
ModulusEstimate<S> empirical_modulus(Law law, const S& eps, std::size_t rows, std::size_t cols,
                                     std::size_t samples, std::uint64_t seed, std::size_t budget = 16);

}  // namespace bpb
