// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "bpb/operators.hpp"

namespace bpb::detail {

template <Scalar S>
void require_open_interval(const S& eps, const S& hi, const char* op, const char* hi_text) {
  if (!(eps > 0 && eps < hi))
    throw PreconditionError(std::string(op) + ": requires 0 < ε < " + hi_text + ", got ε = " + to_string(eps));
}

template <Scalar S, class Operator>
void require_unit_operator(const Operator& T, const char* op) {
  S n = operator_norm(T);
  if (!equals(n, S(1))) throw PreconditionError(std::string(op) + ": requires ‖T‖ = 1, got " + to_string(n));
}

template <Scalar S>
void require_unit_vector(const MeasureSpace<S>& space, const Density<S>& f, const char* op) {
  S n = l1_norm(space, f);
  if (!equals(n, S(1))) throw PreconditionError(std::string(op) + ": requires ‖f‖₁ = 1, got " + to_string(n));
}

template <Scalar S>
void require_gate(const S& measured, const S& gate, const char* formula) {
  if (!exceeds(measured, gate)) throw GateError(formula, to_string(measured), to_string(gate));
}

// Throws InvariantViolation with `what` unless `ok`.
inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

}  // namespace bpb::detail
