// SPDX-License-Identifier: Apache-2.0
//
// Structural reductions: patching a repair found on a band of the domain
// back into the full operator, and repairing operators into a finite
// ℓ∞-sum one component at a time.
#pragma once

#include <functional>
#include <vector>

#include "bpb/report.hpp"

namespace bpb {

// Rows of T on the band (in band order), as an operator on the sub-space.
template <Scalar S>
KernelMeasure<S> restrict_to_band(const KernelMeasure<S>& T, const AtomSet& band);
template <Scalar S>
SupKernel<S> restrict_to_band(const SupKernel<S>& T, const AtomSet& band);

template <Scalar S>
Density<S> restrict_to_band(const Density<S>& f, const AtomSet& band);

// g on the band, zero elsewhere, as a density on an n-atom space.
template <Scalar S>
Density<S> extend_by_zero(const Density<S>& g, const AtomSet& band, std::size_t n);

template <Scalar S, class Operator>
struct BandExtension {
  Density<S> g;
  Operator op;
};

// S = S₁P + T(Id − P): rows on the band come from S₁, the others from T.
// Requires ‖T‖ = 1 and ‖S₁‖ = ‖g₁‖ = ‖S₁g₁‖ = 1 on the band.
template <Scalar S>
BandExtension<S, KernelMeasure<S>> band_extend_repair(const KernelMeasure<S>& T, const AtomSet& band,
                                                      const Density<S>& g1, const KernelMeasure<S>& S1);
template <Scalar S>
BandExtension<S, SupKernel<S>> band_extend_repair(const SupKernel<S>& T, const AtomSet& band,
                                                  const Density<S>& g1, const SupKernel<S>& S1);

enum class ComponentKind { functional, sup_kernel };

std::string_view kind_name(ComponentKind kind);
ComponentKind parse_kind(std::string_view text);

template <Scalar S>
struct SumComponent {
  ComponentKind kind;
  SupKernel<S> kernel;  // a functional is a kernel with one column

  bool operator==(const SumComponent&) const = default;
};

// Operator into the ℓ∞-sum of its components' codomains.
template <Scalar S>
class SumOperator {
 public:
  explicit SumOperator(std::vector<SumComponent<S>> components);

  const MeasureSpace<S>& domain() const { return components_.front().kernel.domain(); }
  std::size_t size() const noexcept { return components_.size(); }
  const SumComponent<S>& component(std::size_t j) const { return components_.at(j); }
  const std::vector<SumComponent<S>>& components() const noexcept { return components_; }

  bool operator==(const SumOperator&) const = default;

 private:
  std::vector<SumComponent<S>> components_;
};

template <Scalar S>
S operator_norm(const SumOperator<S>& T);
// maxⱼ ‖Tⱼf‖∞.
template <Scalar S>
S image_norm(const SumOperator<S>& T, const Density<S>& f);
template <Scalar S>
S operator_distance(const SumOperator<S>& T, const SumOperator<S>& U);

template <Scalar S>
using SumReport = RepairReport<S, SumOperator<S>>;

template <Scalar S>
struct ComponentRepair {
  // η(ε): the repair accepts ‖Tⱼf‖ > 1 − η(ε).
  std::function<S(const S&)> modulus;
  // Must return both distances below ε.
  std::function<SupReport<S>(const SupKernel<S>&, const Density<S>&, const S&)> repair;
};

// functional: bump repair on a one-point K, η = ε²/4.
// sup_kernel: repair_l1linf at ε/10, η = (ε/10)⁸.
template <Scalar S>
ComponentRepair<S> default_component_repair(ComponentKind kind);

template <Scalar S>
struct ComponentRepairs {
  ComponentRepair<S> functional = default_component_repair<S>(ComponentKind::functional);
  ComponentRepair<S> sup_kernel = default_component_repair<S>(ComponentKind::sup_kernel);

  const ComponentRepair<S>& for_kind(ComponentKind kind) const {
    return kind == ComponentKind::functional ? functional : sup_kernel;
  }
};

// Requires ‖T‖ = 1, ‖f‖₁ = 1, ε ∈ (0,1) and ‖Tf‖ > 1 − minⱼ ηⱼ(ε). Repairs the
// lowest-index component above its own gate and keeps the others.
template <Scalar S>
SumReport<S> linf_sum_repair(const SumOperator<S>& T, const Density<S>& f, const S& eps,
                             const ComponentRepairs<S>& repairs = {});

}  // namespace bpb
