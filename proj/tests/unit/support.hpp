// SPDX-License-Identifier: Apache-2.0
//
// Small builders for exact test fixtures. Rationals are written as strings.
#pragma once

#include <doctest.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "bpb/combinators.hpp"
#include "bpb/generate.hpp"
#include "bpb/operators.hpp"
#include "bpb/oracle.hpp"
#include "bpb/repair_l1ck.hpp"
#include "bpb/repair_l1l1.hpp"
#include "bpb/repair_l1linf.hpp"
#include "bpb/selection.hpp"

namespace fx {

using bpb::Rational;
using Q = Rational;
using List = std::initializer_list<const char*>;

inline Q q(const char* s) { return bpb::parse_rational(s); }

inline std::vector<Q> qs(List xs) {
  std::vector<Q> out;
  for (const char* x : xs) out.push_back(q(x));
  return out;
}

// p/q in lowest terms; mpq_class(p, q) leaves the fraction as given.
inline Q frac(long p, long d) {
  Q r(p, d);
  r.canonicalize();
  return r;
}

inline bpb::MeasureSpace<Q> space(List w) { return bpb::MeasureSpace<Q>(qs(w)); }
inline bpb::Density<Q> dens(List v) { return bpb::Density<Q>(qs(v)); }

inline bpb::Matrix<Q> mat(std::initializer_list<List> rows) {
  std::vector<std::vector<Q>> r;
  for (const auto& row : rows) r.push_back(qs(row));
  return bpb::Matrix<Q>::from_rows(r);
}

inline bpb::KernelMeasure<Q> kernel(List m1, List m2, std::initializer_list<List> rows) {
  return bpb::KernelMeasure<Q>(space(m1), space(m2), mat(rows));
}

inline bpb::SupKernel<Q> sup(List mu, std::initializer_list<List> rows) {
  return bpb::SupKernel<Q>(space(mu), mat(rows));
}

inline bpb::Matrix<Q> values_of(const bpb::KernelMeasure<Q>& T) { return T.mass(); }
inline bpb::Matrix<Q> values_of(const bpb::SupKernel<Q>& T) { return T.values(); }

}  // namespace fx
