// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "bpb/scalar.hpp"

namespace bpb {

template <Scalar S>
struct SelectionResult {
  std::vector<std::size_t> indices;  // positions i with cᵢ > r
  S mass;                            // Σ_{i∈A} αᵢ
  S bound;                           // 1 − η/(1−r)
};

// Convex-series selection over real values.
//
// Given a convex combination α (αᵢ ≥ 0, Σαᵢ = 1) of values |cᵢ| ≤ 1 with
// Σαᵢcᵢ > 1 − η, the positions A = {i : cᵢ > r} carry at least
// 1 − η/(1−r) of the total weight for every 0 < r < 1. Ties cᵢ = r are
// excluded. Throws PreconditionError naming the first violated hypothesis.
template <Scalar S>
SelectionResult<S> convex_series_select(const std::vector<S>& alpha, const std::vector<S>& c,
                                        const S& eta, const S& r);

}  // namespace bpb
