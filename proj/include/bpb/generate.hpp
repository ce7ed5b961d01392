// SPDX-License-Identifier: Apache-2.0
//
// Seeded random instances in exact arithmetic.
//
// Integers are drawn from the raw 64-bit output of mt19937_64 by rejection,
// not through std distributions, so a seed yields the same instance on every
// platform and standard library.
#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "bpb/operators.hpp"

namespace bpb {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n).
  std::uint64_t index(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  // k/den with k uniform in [−den, den].
  Rational signed_fraction(std::int64_t den);

 private:
  std::mt19937_64 engine_;
};

// Weights k/8 with k in [1, 16].
MeasureSpace<Rational> random_space(Rng& rng, std::size_t n);

// Norm-one kernels with entries on a 1/16 grid before normalization; about a
// quarter of the entries are zero.
KernelMeasure<Rational> random_kernel(Rng& rng, const MeasureSpace<Rational>& domain,
                                      const MeasureSpace<Rational>& codomain);
SupKernel<Rational> random_sup_kernel(Rng& rng, const MeasureSpace<Rational>& domain, std::size_t cols);

Density<Rational> random_unit_density(Rng& rng, const MeasureSpace<Rational>& space, bool nonnegative);

struct GenOptions {
  bool nonnegative = false;
  // Rescale the rows on supp f to marginal density exactly 1.
  bool unit_rows_on_support = false;
};

// Pairs in Π: ‖T‖ = ‖f‖₁ = ‖Tf‖ = 1.
std::pair<KernelMeasure<Rational>, Density<Rational>> attaining_l1_pair(Rng& rng, std::size_t rows, std::size_t cols,
                                                                        const GenOptions& options = {});
std::pair<SupKernel<Rational>, Density<Rational>> attaining_sup_pair(Rng& rng, std::size_t rows, std::size_t cols,
                                                                     const GenOptions& options = {});

// (T + tE, f + te) normalized, for a random direction (E, e) and the given t.
std::pair<KernelMeasure<Rational>, Density<Rational>> perturb_l1_pair(Rng& rng, const KernelMeasure<Rational>& T,
                                                                      const Density<Rational>& f, const Rational& t,
                                                                      const GenOptions& options = {});
std::pair<SupKernel<Rational>, Density<Rational>> perturb_sup_pair(Rng& rng, const SupKernel<Rational>& T,
                                                                   const Density<Rational>& f, const Rational& t,
                                                                   const GenOptions& options = {});

// A perturbed attaining pair with ‖Tf‖ > 1 − η. The perturbation starts at
// 2⁻ᵏ for a random k in [1, 4] and halves until the gate holds.
std::pair<KernelMeasure<Rational>, Density<Rational>> gated_l1_instance(Rng& rng, std::size_t rows, std::size_t cols,
                                                                        const Rational& eta,
                                                                        const GenOptions& options = {});
std::pair<SupKernel<Rational>, Density<Rational>> gated_sup_instance(Rng& rng, std::size_t rows, std::size_t cols,
                                                                     const Rational& eta,
                                                                     const GenOptions& options = {});

}  // namespace bpb
