// SPDX-License-Identifier: Apache-2.0
//
// Finite atomic measure spaces and their L1 elements.
//
// A MeasureSpace is a nonempty list of strictly positive atom weights. An L1
// element is stored as a Density: one value per atom, so that
// ‖f‖₁ = Σᵢ wᵢ·|fᵢ|. Every discrete density is a simple function with each
// atom its own level set, which is how the repair algorithms decompose it.
#pragma once

#include <cstddef>
#include <vector>

#include "bpb/errors.hpp"
#include "bpb/scalar.hpp"

namespace bpb {

// Sorted, duplicate-free list of atom indices.
using AtomSet = std::vector<std::size_t>;

AtomSet make_atom_set(std::vector<std::size_t> atoms);
bool contains(const AtomSet& set, std::size_t atom);
// {0, …, n−1} minus `set`.
AtomSet complement(const AtomSet& set, std::size_t n);

template <Scalar S>
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<S> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const S& weight(std::size_t atom) const { return weights_.at(atom); }
  const std::vector<S>& weights() const noexcept { return weights_; }
  S total() const;

  // The sub-space on the listed atoms (in set order).
  MeasureSpace restrict_to(const AtomSet& atoms) const;

  bool operator==(const MeasureSpace&) const = default;

 private:
  std::vector<S> weights_;
};

template <Scalar S>
struct Density {
  std::vector<S> values;

  Density() = default;
  explicit Density(std::vector<S> v) : values(std::move(v)) {}
  static Density zeros(std::size_t n) { return Density(std::vector<S>(n, S(0))); }
  // δᵢ/wᵢ, the positive extreme point of the unit ball at atom i.
  static Density unit_atom(const MeasureSpace<S>& space, std::size_t atom);

  std::size_t size() const noexcept { return values.size(); }
  const S& operator[](std::size_t i) const { return values[i]; }
  S& operator[](std::size_t i) { return values[i]; }

  bool operator==(const Density&) const = default;
};

// ψ: pointwise multiplication by ±1. An isometry of L1 and an involution.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> signs);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<int>& signs() const noexcept { return signs_; }

  template <Scalar S>
  Density<S> apply(const Density<S>& f) const;

  bool operator==(const SignVector&) const = default;

 private:
  std::vector<int> signs_;
};

template <Scalar S>
struct SignSplit {
  SignVector signs;
  Density<S> magnitude;
};

template <Scalar S>
struct BandSplit {
  Density<S> inside;
  Density<S> outside;
};

template <Scalar S>
void require_aligned(const MeasureSpace<S>& space, const Density<S>& f, const char* what);

template <Scalar S>
S l1_norm(const MeasureSpace<S>& space, const Density<S>& f);

template <Scalar S>
S l1_distance(const MeasureSpace<S>& space, const Density<S>& f, const Density<S>& g);

// |f| together with the signs recovering f. Zero entries get sign +1.
template <Scalar S>
SignSplit<S> sign_normalize(const Density<S>& f);

template <Scalar S>
BandSplit<S> band_project(const MeasureSpace<S>& space, const AtomSet& support, const Density<S>& f);

// f restricted to `atoms` and rescaled to unit norm.
template <Scalar S>
Density<S> restrict_normalize(const MeasureSpace<S>& space, const Density<S>& f, const AtomSet& atoms);

template <Scalar S>
AtomSet support_of(const Density<S>& f);

// Σ over `atoms` of wᵢ·|fᵢ|.
template <Scalar S>
S mass_on(const MeasureSpace<S>& space, const Density<S>& f, const AtomSet& atoms);

template <Scalar S>
bool is_nonnegative(const Density<S>& f);

template <Scalar S>
bool is_unit(const MeasureSpace<S>& space, const Density<S>& f);

template <Scalar To, Scalar From>
MeasureSpace<To> scalar_cast(const MeasureSpace<From>& space) {
  std::vector<To> w;
  w.reserve(space.size());
  for (const auto& x : space.weights()) w.push_back(scalar_cast<To>(x));
  return MeasureSpace<To>(std::move(w));
}

template <Scalar To, Scalar From>
Density<To> scalar_cast(const Density<From>& f) {
  std::vector<To> v;
  v.reserve(f.size());
  for (const auto& x : f.values) v.push_back(scalar_cast<To>(x));
  return Density<To>(std::move(v));
}

}  // namespace bpb
