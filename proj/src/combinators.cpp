// SPDX-License-Identifier: Apache-2.0
#include "bpb/combinators.hpp"

#include <string>

#include "bpb/repair_l1ck.hpp"
#include "bpb/repair_l1linf.hpp"
#include "repair_common.hpp"

namespace bpb {

namespace {

void check_band(const AtomSet& band, std::size_t n) {
  for (std::size_t k = 0; k < band.size(); ++k) {
    if (band[k] >= n) throw IndexError("band atom " + std::to_string(band[k]) + " out of range");
    if (k && band[k] <= band[k - 1]) throw PreconditionError("band must be sorted and duplicate-free");
  }
}

template <Scalar S>
Matrix<S> band_rows(const Matrix<S>& m, const AtomSet& band) {
  Matrix<S> out(band.size(), m.cols());
  for (std::size_t k = 0; k < band.size(); ++k)
    for (std::size_t j = 0; j < m.cols(); ++j) out(k, j) = m(band[k], j);
  return out;
}

template <Scalar S>
Matrix<S> patch_rows(const Matrix<S>& full, const AtomSet& band, const Matrix<S>& inner) {
  Matrix<S> out = full;
  for (std::size_t k = 0; k < band.size(); ++k)
    for (std::size_t j = 0; j < full.cols(); ++j) out(band[k], j) = inner(k, j);
  return out;
}

template <Scalar S, class Operator>
void check_inner_pair(const Operator& T, const AtomSet& band, const Density<S>& g1, const Operator& S1) {
  constexpr const char* op = "band_extend_repair";
  check_band(band, T.domain().size());
  if (band.empty()) throw PreconditionError(std::string(op) + ": empty band");
  detail::require_unit_operator<S>(T, op);
  if (!(S1.domain() == T.domain().restrict_to(band)))
    throw AlignmentError(std::string(op) + ": inner operator is not defined on the band");
  require_aligned(S1.domain(), g1, op);
  if (!equals(operator_norm(S1), S(1)) || !is_unit(S1.domain(), g1) || !equals(image_norm(S1, g1), S(1)))
    throw PreconditionError(std::string(op) + ": inner pair does not attain (requires ‖S₁‖ = ‖g₁‖ = ‖S₁g₁‖ = 1)");
}

template <Scalar S, class Operator>
void check_extension(const BandExtension<S, Operator>& out) {
  constexpr const char* op = "band_extend_repair";
  detail::ensure(equals(operator_norm(out.op), S(1)), std::string(op) + ": ‖S‖ ≠ 1");
  detail::ensure(equals(image_norm(out.op, out.g), S(1)), std::string(op) + ": ‖Sg‖ ≠ 1");
}

}  // namespace

template <Scalar S>
KernelMeasure<S> restrict_to_band(const KernelMeasure<S>& T, const AtomSet& band) {
  check_band(band, T.domain().size());
  return KernelMeasure<S>(T.domain().restrict_to(band), T.codomain(), band_rows(T.mass(), band));
}

template <Scalar S>
SupKernel<S> restrict_to_band(const SupKernel<S>& T, const AtomSet& band) {
  check_band(band, T.domain().size());
  return SupKernel<S>(T.domain().restrict_to(band), band_rows(T.values(), band), T.codomain());
}

template <Scalar S>
Density<S> restrict_to_band(const Density<S>& f, const AtomSet& band) {
  check_band(band, f.size());
  Density<S> out = Density<S>::zeros(band.size());
  for (std::size_t k = 0; k < band.size(); ++k) out[k] = f[band[k]];
  return out;
}

template <Scalar S>
Density<S> extend_by_zero(const Density<S>& g, const AtomSet& band, std::size_t n) {
  check_band(band, n);
  if (g.size() != band.size()) throw AlignmentError("extend_by_zero: density does not match the band");
  Density<S> out = Density<S>::zeros(n);
  for (std::size_t k = 0; k < band.size(); ++k) out[band[k]] = g[k];
  return out;
}

template <Scalar S>
BandExtension<S, KernelMeasure<S>> band_extend_repair(const KernelMeasure<S>& T, const AtomSet& band,
                                                      const Density<S>& g1, const KernelMeasure<S>& S1) {
  check_inner_pair(T, band, g1, S1);
  if (!(S1.codomain() == T.codomain())) throw AlignmentError("band_extend_repair: codomains differ");
  BandExtension<S, KernelMeasure<S>> out{
      extend_by_zero(g1, band, T.domain().size()),
      KernelMeasure<S>(T.domain(), T.codomain(), patch_rows(T.mass(), band, S1.mass()))};
  check_extension(out);
  return out;
}

template <Scalar S>
BandExtension<S, SupKernel<S>> band_extend_repair(const SupKernel<S>& T, const AtomSet& band, const Density<S>& g1,
                                                  const SupKernel<S>& S1) {
  check_inner_pair(T, band, g1, S1);
  if (S1.codomain_atoms() != T.codomain_atoms()) throw AlignmentError("band_extend_repair: codomains differ");
  BandExtension<S, SupKernel<S>> out{extend_by_zero(g1, band, T.domain().size()),
                                     SupKernel<S>(T.domain(), patch_rows(T.values(), band, S1.values()),
                                                  T.codomain())};
  check_extension(out);
  return out;
}

std::string_view kind_name(ComponentKind kind) {
  return kind == ComponentKind::functional ? "functional" : "sup_kernel";
}

ComponentKind parse_kind(std::string_view text) {
  if (text == "functional") return ComponentKind::functional;
  if (text == "sup_kernel") return ComponentKind::sup_kernel;
  throw ParseError("unknown component kind '" + std::string(text) + "'");
}

template <Scalar S>
SumOperator<S>::SumOperator(std::vector<SumComponent<S>> components) : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("sum operator needs at least one component");
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& c = components_[j];
    if (!(c.kernel.domain() == components_.front().kernel.domain()))
      throw AlignmentError("sum component " + std::to_string(j) + " has a different domain");
    if (c.kind == ComponentKind::functional && c.kernel.codomain_atoms() != 1)
      throw DomainError("functional component " + std::to_string(j) + " must have exactly one column");
  }
}

template <Scalar S>
S operator_norm(const SumOperator<S>& T) {
  S best(0);
  for (const auto& c : T.components()) {
    S n = sup_norm(c.kernel);
    if (n > best) best = n;
  }
  return best;
}

template <Scalar S>
S image_norm(const SumOperator<S>& T, const Density<S>& f) {
  S best(0);
  for (const auto& c : T.components()) {
    S n = image_norm(c.kernel, f);
    if (n > best) best = n;
  }
  return best;
}

template <Scalar S>
S operator_distance(const SumOperator<S>& T, const SumOperator<S>& U) {
  if (T.size() != U.size()) throw AlignmentError("sum operators have different component counts");
  S best(0);
  for (std::size_t j = 0; j < T.size(); ++j) {
    S d = operator_distance(T.component(j).kernel, U.component(j).kernel);
    if (d > best) best = d;
  }
  return best;
}

template <Scalar S>
ComponentRepair<S> default_component_repair(ComponentKind kind) {
  if (kind == ComponentKind::functional) {
    return {[](const S& eps) { return bump_defect(eps); },
            [](const SupKernel<S>& T, const Density<S>& f, const S& eps) { return bump_repair(T, f, eps); }};
  }
  return {[](const S& eps) { return l1linf_defect(S(eps / S(10))); },
          [](const SupKernel<S>& T, const Density<S>& f, const S& eps) {
            return repair_l1linf(T, f, S(eps / S(10)));
          }};
}

template <Scalar S>
SumReport<S> linf_sum_repair(const SumOperator<S>& T, const Density<S>& f, const S& eps,
                             const ComponentRepairs<S>& repairs) {
  constexpr const char* op = "linf_sum_repair";
  detail::require_open_interval(eps, S(1), op, "1");
  require_aligned(T.domain(), f, op);
  detail::require_unit_operator<S>(T, op);
  detail::require_unit_vector(T.domain(), f, op);

  std::vector<S> gates, norms;
  S min_eta(0);
  for (std::size_t j = 0; j < T.size(); ++j) {
    S eta = repairs.for_kind(T.component(j).kind).modulus(eps);
    if (j == 0 || eta < min_eta) min_eta = eta;
    gates.push_back(S(1) - eta);
    norms.push_back(image_norm(T.component(j).kernel, f));
  }
  const S threshold = S(1) - min_eta;
  detail::require_gate(image_norm(T, f), threshold, "‖Tf‖ > 1 − minⱼ ηⱼ(ε)");

  std::size_t jstar = T.size();
  for (std::size_t j = 0; j < T.size() && jstar == T.size(); ++j)
    if (exceeds(norms[j], gates[j])) jstar = j;
  if (jstar == T.size())
    throw GateError("‖Tⱼf‖ > 1 − ηⱼ(ε) for some j", to_string(image_norm(T, f)), to_string(threshold));

  const SumComponent<S>& chosen = T.component(jstar);
  StepLog steps;
  steps.record("component", std::to_string(jstar));
  steps.record("kind", std::string(kind_name(chosen.kind)));

  SupKernel<S> inner = chosen.kernel;
  const S cnorm = sup_norm(inner);
  if (!equals(cnorm, S(1))) {
    steps.record_scalar("component_norm", cnorm);
    inner = scale(inner, S(S(1) / cnorm));
  }
  SupReport<S> rep = repairs.for_kind(chosen.kind).repair(inner, f, eps);
  steps.append(rep.steps, "component");

  std::vector<SumComponent<S>> parts = T.components();
  parts[jstar].kernel = rep.op;
  SumOperator<S> Sop(std::move(parts));

  Witness<S> witness{std::nullopt, rep.witness.atom, jstar, rep.witness.value};
  SumReport<S> out{Law::linf_sum, rep.g, Sop, witness, l1_distance(T.domain(), f, rep.g),
                   operator_distance(T, Sop), eps, threshold, std::move(steps)};

  detail::ensure(equals(operator_norm(out.op), S(1)), std::string(op) + ": ‖S‖ ≠ 1");
  detail::ensure(equals(image_norm(out.op, out.g), S(1)), std::string(op) + ": ‖Sg‖ ≠ 1");
  detail::ensure(below(out.dist_vector, eps), std::string(op) + ": ‖f − g‖₁ = " + to_string(out.dist_vector) + " ≥ ε");
  detail::ensure(below(out.dist_operator, eps),
                 std::string(op) + ": ‖T − S‖ = " + to_string(out.dist_operator) + " ≥ ε");
  return out;
}

#define BPB_INSTANTIATE_COMBINATORS(S)                                                                        \
  template KernelMeasure<S> restrict_to_band(const KernelMeasure<S>&, const AtomSet&);                        \
  template SupKernel<S> restrict_to_band(const SupKernel<S>&, const AtomSet&);                                \
  template Density<S> restrict_to_band(const Density<S>&, const AtomSet&);                                    \
  template Density<S> extend_by_zero(const Density<S>&, const AtomSet&, std::size_t);                         \
  template BandExtension<S, KernelMeasure<S>> band_extend_repair(const KernelMeasure<S>&, const AtomSet&,     \
                                                                 const Density<S>&, const KernelMeasure<S>&); \
  template BandExtension<S, SupKernel<S>> band_extend_repair(const SupKernel<S>&, const AtomSet&,             \
                                                             const Density<S>&, const SupKernel<S>&);         \
  template class SumOperator<S>;                                                                              \
  template S operator_norm(const SumOperator<S>&);                                                            \
  template S image_norm(const SumOperator<S>&, const Density<S>&);                                            \
  template S operator_distance(const SumOperator<S>&, const SumOperator<S>&);                                 \
  template ComponentRepair<S> default_component_repair(ComponentKind);                                        \
  template SumReport<S> linf_sum_repair(const SumOperator<S>&, const Density<S>&, const S&,                   \
                                        const ComponentRepairs<S>&);

BPB_INSTANTIATE_COMBINATORS(Rational)
BPB_INSTANTIATE_COMBINATORS(double)

}  // namespace bpb
