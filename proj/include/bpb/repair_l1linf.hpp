// SPDX-License-Identifier: Apache-2.0
//
// Repair for sup-norm targets L1(μ) → L∞(ν).
//
// density_point_attain builds, from a cell set M ⊂ Ω×K and a nonnegative
// unit f₀ with ‖χ̂_M f₀‖ > 1 − ε, a unit g₀ and a codomain atom y₀ such that
// every kernel χ_M + φ with ‖φ‖ ≤ 1 and φ = 0 on M attains its norm at g₀.
//
// repair_l1linf conjugates f to |f|, keeps the atoms whose value against the
// maximizing column t* is close to 1, replaces every cell of the kernel that
// is within ε²/2 of the sign of Tf(t*) by that sign, and uses the previous
// construction to pick g.
#pragma once

#include <vector>

#include "bpb/report.hpp"

namespace bpb {

// Membership matrix over the cells of Ω×K.
class CellSet {
 public:
  CellSet(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), member_(rows * cols, 0) {}
  static CellSet full(std::size_t rows, std::size_t cols);
  static CellSet from_cells(std::size_t rows, std::size_t cols, const std::vector<Cell>& cells);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool contains(std::size_t w, std::size_t t) const { return member_.at(w * cols_ + t) != 0; }
  void insert(std::size_t w, std::size_t t);
  std::vector<Cell> cells() const;
  std::size_t count() const;

  bool operator==(const CellSet&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<char> member_;
};

// The indicator kernel χ_M.
template <Scalar S>
SupKernel<S> indicator_kernel(const MeasureSpace<S>& domain, const CellSet& M);

template <Scalar S>
struct AttainmentSetWitness {
  Density<S> g0;
  std::size_t y0;
  std::vector<AtomSet> H_sets;  // H_j^{y₀} for each j in J
  AtomSet J;
  StepLog steps;
};

// Requires f₀ ≥ 0 unit, ε ∈ (0,1) and maxₜ (χ̂_M f₀)(t) > 1 − ε.
// Guarantees ‖f₀ − g₀‖₁ < 4√ε and (χ̂_M g₀)(y₀) = 1.
template <Scalar S>
AttainmentSetWitness<S> density_point_attain(const MeasureSpace<S>& space, const CellSet& M, const Density<S>& f0,
                                             const S& eps);

template <Scalar S>
S l1linf_defect(const S& eps) {
  return power(eps, 8);
}

// Requires ‖T‖ = 1, ‖f‖₁ = 1, ε ∈ (0,1/3) and ‖Tf‖∞ > 1 − ε⁸.
// Returns (g, S) with |(Sg)(y₀)| = ‖S‖ = 1, ‖T − S‖ < 2ε and ‖f − g‖₁ < 10ε.
template <Scalar S>
SupReport<S> repair_l1linf(const SupKernel<S>& T, const Density<S>& f, const S& eps);

}  // namespace bpb
