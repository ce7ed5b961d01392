// SPDX-License-Identifier: Apache-2.0
#include "bpb/generate.hpp"

#include <limits>

namespace bpb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::index(std::uint64_t n) {
  if (n == 0) throw PreconditionError("Rng::index: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return x % n;
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(index(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Rng::signed_fraction(std::int64_t den) {
  Rational q(static_cast<long>(integer(-den, den)), static_cast<long>(den));
  q.canonicalize();
  return q;
}

MeasureSpace<Rational> random_space(Rng& rng, std::size_t n) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) {
    Rational q(static_cast<long>(rng.integer(1, 16)), 8L);
    q.canonicalize();
    w.push_back(q);
  }
  return MeasureSpace<Rational>(std::move(w));
}

namespace {

// Entry on the 1/16 grid, zero with probability 1/4.
Rational grid_entry(Rng& rng) {
  if (rng.index(4) == 0) return Rational(0);
  return rng.signed_fraction(16);
}

KernelMeasure<Rational> normalize_kernel(Rng& rng, KernelMeasure<Rational> T) {
  Rational n = kernel_norm(T);
  if (n == 0) {
    Matrix<Rational> m = T.mass();
    std::size_t i = rng.index(m.rows());
    m(i, rng.index(m.cols())) = T.domain().weight(i);
    return KernelMeasure<Rational>(T.domain(), T.codomain(), std::move(m));
  }
  return scale(T, Rational(1 / n));
}

SupKernel<Rational> normalize_sup(Rng& rng, SupKernel<Rational> T) {
  Rational n = sup_norm(T);
  if (n == 0) {
    Matrix<Rational> m = T.values();
    m(rng.index(m.rows()), rng.index(m.cols())) = 1;
    return SupKernel<Rational>(T.domain(), std::move(m), T.codomain());
  }
  return scale(T, Rational(1 / n));
}

Density<Rational> normalize_density(const MeasureSpace<Rational>& space, Density<Rational> f) {
  Rational n = l1_norm(space, f);
  for (auto& x : f.values) x /= n;
  return f;
}

std::vector<int> random_signs(Rng& rng, std::size_t n) {
  std::vector<int> s(n);
  for (auto& x : s) x = rng.coin() ? 1 : -1;
  return s;
}

// Random nonempty support, each atom kept with probability 1/2.
AtomSet random_support(Rng& rng, std::size_t n) {
  AtomSet P;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.coin()) P.push_back(i);
  if (P.empty()) P.push_back(rng.index(n));
  return P;
}

Density<Rational> density_on(Rng& rng, const MeasureSpace<Rational>& space, const AtomSet& P,
                             const std::vector<int>& signs) {
  Density<Rational> f = Density<Rational>::zeros(space.size());
  for (std::size_t i : P) f[i] = Rational(signs[i] * static_cast<long>(rng.integer(1, 8)));
  return normalize_density(space, f);
}

void unit_rows(KernelMeasure<Rational>& T, const AtomSet& rows) {
  Matrix<Rational> m = T.mass();
  const std::vector<Rational> dens = marginal_density(T);
  for (std::size_t i : rows) {
    if (dens[i] == 0) {
      m(i, 0) = T.domain().weight(i);
      continue;
    }
    for (auto& x : m.row(i)) x /= dens[i];
  }
  T = KernelMeasure<Rational>(T.domain(), T.codomain(), std::move(m));
}

}  // namespace

KernelMeasure<Rational> random_kernel(Rng& rng, const MeasureSpace<Rational>& domain,
                                      const MeasureSpace<Rational>& codomain) {
  Matrix<Rational> m(domain.size(), codomain.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = grid_entry(rng);
  return normalize_kernel(rng, KernelMeasure<Rational>(domain, codomain, std::move(m)));
}

SupKernel<Rational> random_sup_kernel(Rng& rng, const MeasureSpace<Rational>& domain, std::size_t cols) {
  Matrix<Rational> m(domain.size(), cols);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = grid_entry(rng);
  return normalize_sup(rng, SupKernel<Rational>(domain, std::move(m)));
}

Density<Rational> random_unit_density(Rng& rng, const MeasureSpace<Rational>& space, bool nonnegative) {
  Density<Rational> f = Density<Rational>::zeros(space.size());
  for (auto& x : f.values) x = nonnegative ? abs(grid_entry(rng)) : grid_entry(rng);
  if (l1_norm(space, f) == 0) f[rng.index(f.size())] = 1;
  return normalize_density(space, f);
}

std::pair<KernelMeasure<Rational>, Density<Rational>> attaining_l1_pair(Rng& rng, std::size_t rows, std::size_t cols,
                                                                        const GenOptions& options) {
  MeasureSpace<Rational> dom = random_space(rng, rows), cod = random_space(rng, cols);
  const std::vector<int> gt = random_signs(rng, cols);
  const AtomSet P = random_support(rng, rows);
  std::vector<int> s = options.nonnegative ? std::vector<int>(rows, 1) : random_signs(rng, rows);

  KernelMeasure<Rational> base = random_kernel(rng, dom, cod);
  Matrix<Rational> m = base.mass();
  for (std::size_t i : P) {
    // Row i: mass m₁(i) spread over the columns with sign s_i·g̃(y).
    std::vector<Rational> share(cols);
    Rational total(0);
    for (auto& x : share) {
      x = rng.index(3) == 0 ? Rational(0) : Rational(static_cast<long>(rng.integer(1, 8)));
      total += x;
    }
    if (total == 0) {
      share[rng.index(cols)] = 1;
      total = 1;
    }
    for (std::size_t y = 0; y < cols; ++y) m(i, y) = s[i] * gt[y] * dom.weight(i) * share[y] / total;
  }
  KernelMeasure<Rational> T(dom, cod, std::move(m));
  return {T, density_on(rng, dom, P, s)};
}

std::pair<SupKernel<Rational>, Density<Rational>> attaining_sup_pair(Rng& rng, std::size_t rows, std::size_t cols,
                                                                     const GenOptions& options) {
  MeasureSpace<Rational> dom = random_space(rng, rows);
  const AtomSet P = random_support(rng, rows);
  std::vector<int> s = options.nonnegative ? std::vector<int>(rows, 1) : random_signs(rng, rows);
  const std::size_t t0 = rng.index(cols);
  const int sigma = rng.coin() ? 1 : -1;

  SupKernel<Rational> base = random_sup_kernel(rng, dom, cols);
  Matrix<Rational> m = base.values();
  for (std::size_t i : P) m(i, t0) = sigma * s[i];
  return {SupKernel<Rational>(dom, std::move(m)), density_on(rng, dom, P, s)};
}

std::pair<KernelMeasure<Rational>, Density<Rational>> perturb_l1_pair(Rng& rng, const KernelMeasure<Rational>& T,
                                                                      const Density<Rational>& f, const Rational& t,
                                                                      const GenOptions& options) {
  KernelMeasure<Rational> E = random_kernel(rng, T.domain(), T.codomain());
  Matrix<Rational> m = T.mass();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += t * E(i, j);
  KernelMeasure<Rational> Tp = normalize_kernel(rng, KernelMeasure<Rational>(T.domain(), T.codomain(), std::move(m)));

  Density<Rational> e = random_unit_density(rng, T.domain(), options.nonnegative);
  Density<Rational> fp = f;
  for (std::size_t i = 0; i < fp.size(); ++i) fp[i] += t * e[i];
  if (options.nonnegative)
    for (auto& x : fp.values)
      if (x < 0) x = 0;
  if (l1_norm(T.domain(), fp) == 0) fp = f;
  fp = normalize_density(T.domain(), fp);
  if (options.unit_rows_on_support) unit_rows(Tp, support_of(fp));
  return {Tp, fp};
}

std::pair<SupKernel<Rational>, Density<Rational>> perturb_sup_pair(Rng& rng, const SupKernel<Rational>& T,
                                                                   const Density<Rational>& f, const Rational& t,
                                                                   const GenOptions& options) {
  SupKernel<Rational> E = random_sup_kernel(rng, T.domain(), T.codomain_atoms());
  Matrix<Rational> m = T.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += t * E(i, j);
  SupKernel<Rational> Tp = normalize_sup(rng, SupKernel<Rational>(T.domain(), std::move(m), T.codomain()));

  Density<Rational> e = random_unit_density(rng, T.domain(), options.nonnegative);
  Density<Rational> fp = f;
  for (std::size_t i = 0; i < fp.size(); ++i) fp[i] += t * e[i];
  if (l1_norm(T.domain(), fp) == 0) fp = f;
  return {Tp, normalize_density(T.domain(), fp)};
}

namespace {

template <class Pair, class Perturb>
Pair gate_by_halving(Rng& rng, const Pair& base, const Rational& eta, Perturb perturb) {
  Rational t(1L, 1L << rng.integer(1, 4));
  t.canonicalize();
  const Rational gate = 1 - eta;
  for (int step = 0; step < 4096; ++step) {
    Pair p = perturb(t);
    if (image_norm(p.first, p.second) > gate) return p;
    t /= 2;
  }
  return base;
}

}  // namespace

std::pair<KernelMeasure<Rational>, Density<Rational>> gated_l1_instance(Rng& rng, std::size_t rows, std::size_t cols,
                                                                        const Rational& eta,
                                                                        const GenOptions& options) {
  auto base = attaining_l1_pair(rng, rows, cols, options);
  if (options.unit_rows_on_support) unit_rows(base.first, support_of(base.second));
  return gate_by_halving(rng, base, eta,
                         [&](const Rational& t) { return perturb_l1_pair(rng, base.first, base.second, t, options); });
}

std::pair<SupKernel<Rational>, Density<Rational>> gated_sup_instance(Rng& rng, std::size_t rows, std::size_t cols,
                                                                     const Rational& eta, const GenOptions& options) {
  auto base = attaining_sup_pair(rng, rows, cols, options);
  return gate_by_halving(rng, base, eta,
                         [&](const Rational& t) { return perturb_sup_pair(rng, base.first, base.second, t, options); });
}

}  // namespace bpb
