// SPDX-License-Identifier: Apache-2.0
#include "bpb/selection.hpp"

#include <string>

#include "bpb/errors.hpp"

namespace bpb {

template <Scalar S>
SelectionResult<S> convex_series_select(const std::vector<S>& alpha, const std::vector<S>& c,
                                        const S& eta, const S& r) {
  if (alpha.size() != c.size()) throw AlignmentError("convex_series_select: α and c differ in length");
  if (!(r > 0 && r < 1)) throw PreconditionError("convex_series_select: requires 0 < r < 1, got r = " + to_string(r));

  S total(0), pairing(0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (sign_of(alpha[i]) < 0)
      throw PreconditionError("convex_series_select: requires αᵢ ≥ 0 (α" + std::to_string(i) + " = " +
                              to_string(alpha[i]) + ")");
    if (!at_most(abs_of(c[i]), S(1)))
      throw PreconditionError("convex_series_select: requires |cᵢ| ≤ 1 (c" + std::to_string(i) + " = " +
                              to_string(c[i]) + ")");
    total += alpha[i];
    pairing += alpha[i] * c[i];
  }
  if (!equals(total, S(1)))
    throw PreconditionError("convex_series_select: requires Σαᵢ = 1, got " + to_string(total));
  if (!exceeds(pairing, S(S(1) - eta)))
    throw PreconditionError("convex_series_select: requires Σαᵢcᵢ > 1 − η (Σαᵢcᵢ = " + to_string(pairing) +
                            ", 1 − η = " + to_string(S(S(1) - eta)) + ")");

  SelectionResult<S> out{{}, S(0), S(S(1) - eta / S(S(1) - r))};
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (exceeds(c[i], r)) {
      out.indices.push_back(i);
      out.mass += alpha[i];
    }
  }
  if (!at_most(out.bound, out.mass))
    throw InvariantViolation("convex_series_select: selected mass " + to_string(out.mass) +
                             " below the guaranteed " + to_string(out.bound));
  return out;
}

template SelectionResult<Rational> convex_series_select(const std::vector<Rational>&, const std::vector<Rational>&,
                                                        const Rational&, const Rational&);
template SelectionResult<double> convex_series_select(const std::vector<double>&, const std::vector<double>&,
                                                      const double&, const double&);

}  // namespace bpb
