// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bpb/operators.hpp"

namespace bpb {

enum class Law { l1l1, l1linf, ck_clamp, ck_bump, linf_sum };

std::string_view law_name(Law law);
Law parse_law(std::string_view text);

// A cell (domain atom, codomain atom) of the product space.
using Cell = std::pair<std::size_t, std::size_t>;

// Ordered record of the sets and constants a repair chose.
class StepLog {
 public:
  struct Entry {
    std::string name;
    std::string value;
    bool operator==(const Entry&) const = default;
  };

  void record(std::string name, std::string value);
  void record_atoms(std::string name, const AtomSet& atoms);
  void record_cells(std::string name, const std::vector<Cell>& cells);
  template <Scalar S>
  void record_scalar(std::string name, const S& value) {
    record(std::move(name), to_string(value));
  }
  // Appends `other`, prefixing each name with `prefix` + ".".
  void append(const StepLog& other, std::string_view prefix);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  // Value of the first entry called `name`, if any.
  std::optional<std::string> find(std::string_view name) const;

  bool operator==(const StepLog&) const = default;

 private:
  std::vector<Entry> entries_;
};

std::string format_atoms(const AtomSet& atoms);
std::string format_cells(const std::vector<Cell>& cells);

// How the repaired pair certifies ‖Sg‖ = 1.
template <Scalar S>
struct Witness {
  // L1 targets: a functional with ⟨Sg, functional⟩ = 1.
  std::optional<DualVector<S>> functional;
  // Sup-norm targets: the codomain atom where |(Sg)(atom)| = 1.
  std::optional<std::size_t> atom;
  // ℓ∞-sums: the component holding `atom`.
  std::optional<std::size_t> component;
  // The attained value: ⟨Sg, functional⟩ or (Sg)(atom).
  S value{};

  bool operator==(const Witness&) const = default;
};

template <Scalar S, class Operator>
struct RepairReport {
  Law law;
  Density<S> g;
  Operator op;
  Witness<S> witness;
  S dist_vector;    // ‖f − g‖₁
  S dist_operator;  // ‖T − S‖
  S epsilon;
  S threshold;      // 1 − η(ε), the gate the input had to exceed
  StepLog steps;
};

template <Scalar S>
using L1Report = RepairReport<S, KernelMeasure<S>>;
template <Scalar S>
using SupReport = RepairReport<S, SupKernel<S>>;

}  // namespace bpb
