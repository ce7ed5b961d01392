// SPDX-License-Identifier: Apache-2.0
#include "bpb/spaces.hpp"

#include <algorithm>
#include <string>

namespace bpb {

AtomSet make_atom_set(std::vector<std::size_t> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

bool contains(const AtomSet& set, std::size_t atom) {
  return std::binary_search(set.begin(), set.end(), atom);
}

AtomSet complement(const AtomSet& set, std::size_t n) {
  AtomSet out;
  for (std::size_t i = 0; i < n; ++i)
    if (!contains(set, i)) out.push_back(i);
  return out;
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) throw DomainError("sign vector entries must be +1 or -1");
}

template <Scalar S>
Density<S> SignVector::apply(const Density<S>& f) const {
  if (f.size() != signs_.size()) throw AlignmentError("sign vector and density differ in length");
  Density<S> out = f;
  for (std::size_t i = 0; i < signs_.size(); ++i)
    if (signs_[i] < 0) out[i] = -out[i];
  return out;
}

template <Scalar S>
MeasureSpace<S>::MeasureSpace(std::vector<S> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("measure space needs at least one atom");
  for (const auto& w : weights_)
    if (!(w > 0)) throw DomainError("nonpositive atom weight");
}

template <Scalar S>
S MeasureSpace<S>::total() const {
  S sum(0);
  for (const auto& w : weights_) sum += w;
  return sum;
}

template <Scalar S>
MeasureSpace<S> MeasureSpace<S>::restrict_to(const AtomSet& atoms) const {
  std::vector<S> w;
  w.reserve(atoms.size());
  for (auto a : atoms) {
    if (a >= size()) throw IndexError("atom " + std::to_string(a) + " out of range");
    w.push_back(weights_[a]);
  }
  return MeasureSpace(std::move(w));
}

template <Scalar S>
Density<S> Density<S>::unit_atom(const MeasureSpace<S>& space, std::size_t atom) {
  if (atom >= space.size()) throw IndexError("atom " + std::to_string(atom) + " out of range");
  Density d = zeros(space.size());
  d[atom] = S(1) / space.weight(atom);
  return d;
}

template <Scalar S>
void require_aligned(const MeasureSpace<S>& space, const Density<S>& f, const char* what) {
  if (f.size() != space.size())
    throw AlignmentError(std::string(what) + ": density has " + std::to_string(f.size()) +
                         " entries, space has " + std::to_string(space.size()) + " atoms");
}

template <Scalar S>
S l1_norm(const MeasureSpace<S>& space, const Density<S>& f) {
  require_aligned(space, f, "l1_norm");
  S sum(0);
  for (std::size_t i = 0; i < f.size(); ++i) sum += space.weight(i) * abs_of(f[i]);
  return sum;
}

template <Scalar S>
S l1_distance(const MeasureSpace<S>& space, const Density<S>& f, const Density<S>& g) {
  require_aligned(space, f, "l1_distance");
  require_aligned(space, g, "l1_distance");
  S sum(0);
  for (std::size_t i = 0; i < f.size(); ++i) sum += space.weight(i) * abs_of(S(f[i] - g[i]));
  return sum;
}

template <Scalar S>
SignSplit<S> sign_normalize(const Density<S>& f) {
  std::vector<int> signs(f.size());
  Density<S> magnitude = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    signs[i] = unit_sign(f[i]);
    magnitude[i] = abs_of(f[i]);
  }
  return {SignVector(std::move(signs)), std::move(magnitude)};
}

template <Scalar S>
BandSplit<S> band_project(const MeasureSpace<S>& space, const AtomSet& support, const Density<S>& f) {
  require_aligned(space, f, "band_project");
  for (auto a : support)
    if (a >= space.size()) throw IndexError("band atom " + std::to_string(a) + " out of range");
  BandSplit<S> split{Density<S>::zeros(f.size()), Density<S>::zeros(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) (contains(support, i) ? split.inside : split.outside)[i] = f[i];
  return split;
}

template <Scalar S>
S mass_on(const MeasureSpace<S>& space, const Density<S>& f, const AtomSet& atoms) {
  require_aligned(space, f, "mass_on");
  S sum(0);
  for (auto a : atoms) {
    if (a >= space.size()) throw IndexError("atom " + std::to_string(a) + " out of range");
    sum += space.weight(a) * abs_of(f[a]);
  }
  return sum;
}

template <Scalar S>
Density<S> restrict_normalize(const MeasureSpace<S>& space, const Density<S>& f, const AtomSet& atoms) {
  S mass = mass_on(space, f, atoms);
  if (is_zero(mass)) throw DegenerateRestriction("density has no mass on the restriction set");
  Density<S> out = Density<S>::zeros(f.size());
  for (auto a : atoms) out[a] = f[a] / mass;
  return out;
}

template <Scalar S>
AtomSet support_of(const Density<S>& f) {
  AtomSet out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!is_zero(f[i])) out.push_back(i);
  return out;
}

template <Scalar S>
bool is_nonnegative(const Density<S>& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](const S& x) { return sign_of(x) >= 0; });
}

template <Scalar S>
bool is_unit(const MeasureSpace<S>& space, const Density<S>& f) {
  return equals(l1_norm(space, f), S(1));
}

#define BPB_INSTANTIATE_SPACES(S)                                                               \
  template class MeasureSpace<S>;                                                               \
  template struct Density<S>;                                                                   \
  template Density<S> SignVector::apply(const Density<S>&) const;                               \
  template void require_aligned(const MeasureSpace<S>&, const Density<S>&, const char*);        \
  template S l1_norm(const MeasureSpace<S>&, const Density<S>&);                                \
  template S l1_distance(const MeasureSpace<S>&, const Density<S>&, const Density<S>&);         \
  template SignSplit<S> sign_normalize(const Density<S>&);                                      \
  template BandSplit<S> band_project(const MeasureSpace<S>&, const AtomSet&, const Density<S>&); \
  template S mass_on(const MeasureSpace<S>&, const Density<S>&, const AtomSet&);                \
  template Density<S> restrict_normalize(const MeasureSpace<S>&, const Density<S>&, const AtomSet&); \
  template AtomSet support_of(const Density<S>&);                                               \
  template bool is_nonnegative(const Density<S>&);                                              \
  template bool is_unit(const MeasureSpace<S>&, const Density<S>&);

BPB_INSTANTIATE_SPACES(Rational)
BPB_INSTANTIATE_SPACES(double)

}  // namespace bpb
