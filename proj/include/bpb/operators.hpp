// SPDX-License-Identifier: Apache-2.0
//
// Kernel representations of operators on a finite atomic L1 space.
//
// KernelMeasure: L1(m₁) → L1(m₂) given by a signed mass ν(i,j) on each
// product atom. (Tf)(j) = Σᵢ f(i)·ν(i,j) / m₂(j), and the operator norm is
// the largest marginal density maxᵢ Σⱼ|ν(i,j)| / m₁(i).
//
// SupKernel: L1(μ) → L∞(K) or C(K) for a finite K, given by a bounded matrix
// h(ω,t). (Tf)(t) = Σ_ω μ(ω)·h(ω,t)·f(ω) and the operator norm is max |h|.
// The sup norm ignores codomain weights, which are kept only for reporting.
#pragma once

#include <optional>
#include <vector>

#include "bpb/matrix.hpp"
#include "bpb/spaces.hpp"

namespace bpb {

template <Scalar S>
struct DualVector {
  std::vector<S> values;

  DualVector() = default;
  explicit DualVector(std::vector<S> v) : values(std::move(v)) {}
  std::size_t size() const noexcept { return values.size(); }
  const S& operator[](std::size_t i) const { return values[i]; }
  bool operator==(const DualVector&) const = default;
};

template <Scalar S>
class KernelMeasure {
 public:
  KernelMeasure(MeasureSpace<S> domain, MeasureSpace<S> codomain, Matrix<S> mass);

  const MeasureSpace<S>& domain() const noexcept { return domain_; }
  const MeasureSpace<S>& codomain() const noexcept { return codomain_; }
  const Matrix<S>& mass() const noexcept { return mass_; }
  const S& operator()(std::size_t i, std::size_t j) const { return mass_(i, j); }

  bool operator==(const KernelMeasure&) const = default;

 private:
  MeasureSpace<S> domain_;
  MeasureSpace<S> codomain_;
  Matrix<S> mass_;
};

template <Scalar S>
class SupKernel {
 public:
  SupKernel(MeasureSpace<S> domain, Matrix<S> values,
            std::optional<MeasureSpace<S>> codomain = std::nullopt);

  const MeasureSpace<S>& domain() const noexcept { return domain_; }
  std::size_t codomain_atoms() const noexcept { return values_.cols(); }
  const std::optional<MeasureSpace<S>>& codomain() const noexcept { return codomain_; }
  const Matrix<S>& values() const noexcept { return values_; }
  const S& operator()(std::size_t w, std::size_t t) const { return values_(w, t); }

  bool operator==(const SupKernel&) const = default;

 private:
  MeasureSpace<S> domain_;
  Matrix<S> values_;
  std::optional<MeasureSpace<S>> codomain_;
};

// d|ν|¹/dm₁ per domain atom.
template <Scalar S>
std::vector<S> marginal_density(const KernelMeasure<S>& T);

template <Scalar S>
S kernel_norm(const KernelMeasure<S>& T);

// Tf as a density with respect to the codomain weights.
template <Scalar S>
Density<S> apply_l1l1(const KernelMeasure<S>& T, const Density<S>& f);

// ⟨Tf, g⟩ = Σᵢⱼ f(i)·g(j)·ν(i,j).
template <Scalar S>
S pairing(const KernelMeasure<S>& T, const Density<S>& f, const DualVector<S>& g);

template <Scalar S>
S sup_norm(const SupKernel<S>& T);

template <Scalar S>
std::vector<S> apply_l1linf(const SupKernel<S>& T, const Density<S>& f);

// Column h(·,s), the point evaluation T*δ_s as an L∞(μ) function.
template <Scalar S>
std::vector<S> adjoint_point(const SupKernel<S>& T, std::size_t s);

template <Scalar S>
S max_abs(const std::vector<S>& values);

// Lowest index attaining max |values|.
template <Scalar S>
std::size_t argmax_abs(const std::vector<S>& values);

// Uniform entry points used by generic code.
template <Scalar S>
S operator_norm(const KernelMeasure<S>& T) { return kernel_norm(T); }
template <Scalar S>
S operator_norm(const SupKernel<S>& T) { return sup_norm(T); }

template <Scalar S>
S image_norm(const KernelMeasure<S>& T, const Density<S>& f) {
  return l1_norm(T.codomain(), apply_l1l1(T, f));
}
template <Scalar S>
S image_norm(const SupKernel<S>& T, const Density<S>& f) {
  return max_abs(apply_l1linf(T, f));
}

// ‖T − S‖ for operators on the same spaces.
template <Scalar S>
S operator_distance(const KernelMeasure<S>& T, const KernelMeasure<S>& U);
template <Scalar S>
S operator_distance(const SupKernel<S>& T, const SupKernel<S>& U);

// T∘ψ for the sign isometry ψ: each domain row is multiplied by its sign.
template <Scalar S>
KernelMeasure<S> conjugate(const KernelMeasure<S>& T, const SignVector& signs);
template <Scalar S>
SupKernel<S> conjugate(const SupKernel<S>& T, const SignVector& signs);

template <Scalar S>
KernelMeasure<S> scale(const KernelMeasure<S>& T, const S& factor);
template <Scalar S>
SupKernel<S> scale(const SupKernel<S>& T, const S& factor);

// g(j) = sign((Tf)(j)) with sign(0) = +1: a norming functional for Tf.
template <Scalar S>
DualVector<S> norming_functional(const Density<S>& image);

template <Scalar To, Scalar From>
KernelMeasure<To> scalar_cast(const KernelMeasure<From>& T) {
  return KernelMeasure<To>(scalar_cast<To>(T.domain()), scalar_cast<To>(T.codomain()),
                           scalar_cast<To>(T.mass()));
}

template <Scalar To, Scalar From>
SupKernel<To> scalar_cast(const SupKernel<From>& T) {
  std::optional<MeasureSpace<To>> cod;
  if (T.codomain()) cod = scalar_cast<To>(*T.codomain());
  return SupKernel<To>(scalar_cast<To>(T.domain()), scalar_cast<To>(T.values()), std::move(cod));
}

}  // namespace bpb
