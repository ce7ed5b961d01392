// SPDX-License-Identifier: Apache-2.0
//
// JSON instance and result files. Instances are stored exactly; in exact mode
// every scalar is written as a "p/q" string, in approx mode as a JSON number.
// Reading accepts either form in both modes.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpb/report.hpp"

namespace bpb {

enum class CodomainKind { l1, linf, ck };

std::string_view codomain_name(CodomainKind kind);
CodomainKind codomain_for(Law law);

struct Instance {
  ScalarMode scalar_mode = ScalarMode::exact;
  std::vector<Rational> domain_weights;
  CodomainKind codomain_kind = CodomainKind::l1;
  std::vector<Rational> codomain_weights;  // l1 only
  std::size_t codomain_atoms = 0;          // linf and ck only
  Matrix<Rational> matrix;
  std::vector<Rational> vector;
  Rational epsilon;

  bool operator==(const Instance&) const = default;
};

// Throws ParseError naming the offending field (or the JSON line and column).
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance make_instance(const KernelMeasure<Rational>& T, const Density<Rational>& f, const Rational& eps,
                       ScalarMode mode);
Instance make_instance(const SupKernel<Rational>& T, const Density<Rational>& f, const Rational& eps,
                       CodomainKind kind, ScalarMode mode);

template <Scalar S>
MeasureSpace<S> domain_of(const Instance& inst);
// Require an l1 codomain, resp. linf or ck.
template <Scalar S>
KernelMeasure<S> kernel_of(const Instance& inst);
template <Scalar S>
SupKernel<S> sup_kernel_of(const Instance& inst);
template <Scalar S>
Density<S> vector_of(const Instance& inst);

// What each law guarantees: ‖f − g‖₁ < vector and ‖T − S‖ < operator_bound,
// or ‖T − S‖ < √operator_bound when operator_sqrt is set.
template <Scalar S>
struct DistanceBounds {
  S vector;
  S operator_bound;
  bool operator_sqrt;
};

template <Scalar S>
DistanceBounds<S> distance_bounds(Law law, const S& eps);

// The gate defect η(ε) a single repair call checks.
template <Scalar S>
S gate_defect(Law law, const S& eps);

template <Scalar S>
std::string serialize_result(const Instance& inst, const L1Report<S>& rep);
template <Scalar S>
std::string serialize_result(const Instance& inst, const SupReport<S>& rep);

// Replays a result file: attainment by brute force, the witness, the
// recorded distances and bounds, and the input gate. Returns one message per
// failed check; empty means certified. `mode` overrides the file's scalar_mode.
std::vector<std::string> certify_result(std::string_view text, std::optional<ScalarMode> mode = std::nullopt);

std::string read_file(const std::string& path);
// Writes to path + ".tmp" and renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bpb
