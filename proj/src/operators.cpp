// SPDX-License-Identifier: Apache-2.0
#include "bpb/operators.hpp"

#include <string>

namespace bpb {

template <Scalar S>
KernelMeasure<S>::KernelMeasure(MeasureSpace<S> domain, MeasureSpace<S> codomain, Matrix<S> mass)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), mass_(std::move(mass)) {
  if (mass_.rows() != domain_.size() || mass_.cols() != codomain_.size())
    throw AlignmentError("kernel is " + std::to_string(mass_.rows()) + "x" + std::to_string(mass_.cols()) +
                         ", spaces are " + std::to_string(domain_.size()) + "x" +
                         std::to_string(codomain_.size()));
}

template <Scalar S>
SupKernel<S>::SupKernel(MeasureSpace<S> domain, Matrix<S> values, std::optional<MeasureSpace<S>> codomain)
    : domain_(std::move(domain)), values_(std::move(values)), codomain_(std::move(codomain)) {
  if (values_.rows() != domain_.size())
    throw AlignmentError("sup kernel has " + std::to_string(values_.rows()) + " rows, domain has " +
                         std::to_string(domain_.size()) + " atoms");
  if (values_.cols() == 0) throw DomainError("sup kernel needs at least one codomain atom");
  if (codomain_ && codomain_->size() != values_.cols())
    throw AlignmentError("sup kernel codomain weights do not match its column count");
}

template <Scalar S>
std::vector<S> marginal_density(const KernelMeasure<S>& T) {
  std::vector<S> out(T.domain().size(), S(0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& x : T.mass().row(i)) out[i] += abs_of(x);
    out[i] /= T.domain().weight(i);
  }
  return out;
}

template <Scalar S>
S kernel_norm(const KernelMeasure<S>& T) {
  S best(0);
  for (const auto& d : marginal_density(T))
    if (d > best) best = d;
  return best;
}

template <Scalar S>
Density<S> apply_l1l1(const KernelMeasure<S>& T, const Density<S>& f) {
  require_aligned(T.domain(), f, "apply_l1l1");
  Density<S> out = Density<S>::zeros(T.codomain().size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_zero(f[i])) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += f[i] * T(i, j);
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] /= T.codomain().weight(j);
  return out;
}

template <Scalar S>
S pairing(const KernelMeasure<S>& T, const Density<S>& f, const DualVector<S>& g) {
  require_aligned(T.domain(), f, "pairing");
  if (g.size() != T.codomain().size()) throw AlignmentError("pairing: dual vector length mismatch");
  S sum(0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) sum += f[i] * g[j] * T(i, j);
  return sum;
}

template <Scalar S>
S sup_norm(const SupKernel<S>& T) {
  S best(0);
  const auto& h = T.values();
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (const auto& x : h.row(i)) {
      S a = abs_of(x);
      if (a > best) best = a;
    }
  return best;
}

template <Scalar S>
std::vector<S> apply_l1linf(const SupKernel<S>& T, const Density<S>& f) {
  require_aligned(T.domain(), f, "apply_l1linf");
  std::vector<S> out(T.codomain_atoms(), S(0));
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (is_zero(f[w])) continue;
    S mass = T.domain().weight(w) * f[w];
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += mass * T(w, t);
  }
  return out;
}

template <Scalar S>
std::vector<S> adjoint_point(const SupKernel<S>& T, std::size_t s) {
  if (s >= T.codomain_atoms()) throw IndexError("codomain atom " + std::to_string(s) + " out of range");
  return T.values().column(s);
}

template <Scalar S>
S max_abs(const std::vector<S>& values) {
  S best(0);
  for (const auto& x : values) {
    S a = abs_of(x);
    if (a > best) best = a;
  }
  return best;
}

template <Scalar S>
std::size_t argmax_abs(const std::vector<S>& values) {
  std::size_t arg = 0;
  S best(-1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    S a = abs_of(values[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  return arg;
}

template <Scalar S>
S operator_distance(const KernelMeasure<S>& T, const KernelMeasure<S>& U) {
  if (T.domain() != U.domain() || T.codomain() != U.codomain())
    throw AlignmentError("operator_distance: kernels act on different spaces");
  S best(0);
  for (std::size_t i = 0; i < T.domain().size(); ++i) {
    S row(0);
    for (std::size_t j = 0; j < T.codomain().size(); ++j) row += abs_of(S(T(i, j) - U(i, j)));
    row /= T.domain().weight(i);
    if (row > best) best = row;
  }
  return best;
}

template <Scalar S>
S operator_distance(const SupKernel<S>& T, const SupKernel<S>& U) {
  if (T.domain() != U.domain() || T.codomain_atoms() != U.codomain_atoms())
    throw AlignmentError("operator_distance: sup kernels act on different spaces");
  S best(0);
  for (std::size_t i = 0; i < T.domain().size(); ++i)
    for (std::size_t t = 0; t < T.codomain_atoms(); ++t) {
      S d = abs_of(S(T(i, t) - U(i, t)));
      if (d > best) best = d;
    }
  return best;
}

namespace {

template <Scalar S>
Matrix<S> scale_rows(const Matrix<S>& m, const SignVector& signs) {
  if (signs.size() != m.rows()) throw AlignmentError("sign vector does not match the domain");
  Matrix<S> out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (signs[i] < 0)
      for (auto& x : out.row(i)) x = -x;
  return out;
}

template <Scalar S>
Matrix<S> scale_all(const Matrix<S>& m, const S& factor) {
  Matrix<S> out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto& x : out.row(i)) x *= factor;
  return out;
}

}  // namespace

template <Scalar S>
KernelMeasure<S> conjugate(const KernelMeasure<S>& T, const SignVector& signs) {
  return KernelMeasure<S>(T.domain(), T.codomain(), scale_rows(T.mass(), signs));
}

template <Scalar S>
SupKernel<S> conjugate(const SupKernel<S>& T, const SignVector& signs) {
  return SupKernel<S>(T.domain(), scale_rows(T.values(), signs), T.codomain());
}

template <Scalar S>
KernelMeasure<S> scale(const KernelMeasure<S>& T, const S& factor) {
  return KernelMeasure<S>(T.domain(), T.codomain(), scale_all(T.mass(), factor));
}

template <Scalar S>
SupKernel<S> scale(const SupKernel<S>& T, const S& factor) {
  return SupKernel<S>(T.domain(), scale_all(T.values(), factor), T.codomain());
}

template <Scalar S>
DualVector<S> norming_functional(const Density<S>& image) {
  std::vector<S> g(image.size());
  for (std::size_t j = 0; j < image.size(); ++j) g[j] = S(unit_sign(image[j]));
  return DualVector<S>(std::move(g));
}

#define BPB_INSTANTIATE_OPERATORS(S)                                                     \
  template class KernelMeasure<S>;                                                       \
  template class SupKernel<S>;                                                           \
  template std::vector<S> marginal_density(const KernelMeasure<S>&);                     \
  template S kernel_norm(const KernelMeasure<S>&);                                       \
  template Density<S> apply_l1l1(const KernelMeasure<S>&, const Density<S>&);            \
  template S pairing(const KernelMeasure<S>&, const Density<S>&, const DualVector<S>&);  \
  template S sup_norm(const SupKernel<S>&);                                              \
  template std::vector<S> apply_l1linf(const SupKernel<S>&, const Density<S>&);          \
  template std::vector<S> adjoint_point(const SupKernel<S>&, std::size_t);               \
  template S max_abs(const std::vector<S>&);                                             \
  template std::size_t argmax_abs(const std::vector<S>&);                                \
  template S operator_distance(const KernelMeasure<S>&, const KernelMeasure<S>&);        \
  template S operator_distance(const SupKernel<S>&, const SupKernel<S>&);                \
  template KernelMeasure<S> conjugate(const KernelMeasure<S>&, const SignVector&);       \
  template SupKernel<S> conjugate(const SupKernel<S>&, const SignVector&);               \
  template KernelMeasure<S> scale(const KernelMeasure<S>&, const S&);                    \
  template SupKernel<S> scale(const SupKernel<S>&, const S&);                            \
  template DualVector<S> norming_functional(const Density<S>&);

BPB_INSTANTIATE_OPERATORS(Rational)
BPB_INSTANTIATE_OPERATORS(double)

}  // namespace bpb
