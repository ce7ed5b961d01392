// SPDX-License-Identifier: Apache-2.0
#include "bpb/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "bpb/generate.hpp"
#include "bpb/repair_l1ck.hpp"
#include "bpb/repair_l1l1.hpp"

namespace bpb {

namespace {

template <Scalar S>
S max_of(const S& a, const S& b) {
  return a < b ? b : a;
}

template <Scalar S, class Image>
S extreme_point_max(const MeasureSpace<S>& space, Image image) {
  S best(0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    Density<S> e = Density<S>::unit_atom(space, i);
    for (int sgn : {1, -1}) {
      if (sgn < 0)
        for (auto& x : e.values) x = -x;
      best = max_of(best, image(e));
    }
  }
  return best;
}

template <Scalar S>
S defect_from_one(const S& x) {
  return abs_of(S(x - S(1)));
}

template <Scalar S>
PiCertificate<S> base_certificate(const Density<S>& g, const MeasureSpace<S>& space, const S& norm_op,
                                  const S& norm_image) {
  PiCertificate<S> c{false, g, std::nullopt, std::nullopt, std::nullopt, l1_norm(space, g), norm_op, norm_image, S(0)};
  c.residual = max_of(defect_from_one(c.norm_vector), max_of(defect_from_one(norm_op), defect_from_one(norm_image)));
  c.attained = equals(c.residual, S(0));
  return c;
}

template <Scalar S>
std::vector<S> ladder_with(std::vector<S> ladder, const std::vector<S>& extra) {
  for (const auto& e : extra)
    if (e > 0 && e < 1 && std::find(ladder.begin(), ladder.end(), e) == ladder.end()) ladder.push_back(e);
  return ladder;
}

template <Scalar S>
std::vector<S> fractions(std::initializer_list<std::pair<long, long>> list) {
  std::vector<S> out;
  for (auto [p, q] : list) out.push_back(S(p) / S(q));
  return out;
}

template <Scalar S, class Report>
void consider_report(S& best, const Report& rep) {
  S d = max_of(rep.dist_vector, rep.dist_operator);
  if (d < best) best = d;
}

// Attaining candidate for the kernel search; returns max(‖f−w‖, ‖T−S‖).
template <Scalar S>
S kernel_candidate(const Density<S>& f, const KernelMeasure<S>& T, const AtomSet& I) {
  const MeasureSpace<S>& dom = T.domain();
  Density<S> w = Density<S>::zeros(dom.size());
  if (sign_of(mass_on(dom, f, I)) > 0) {
    w = restrict_normalize(dom, f, I);
  } else {
    S total(0);
    for (std::size_t i : I) total += dom.weight(i);
    for (std::size_t i : I) w[i] = S(1) / total;
  }
  const DualVector<S> gt = norming_functional(apply_l1l1(T, w));
  Matrix<S> m = T.mass();
  for (std::size_t i : I) {
    const int si = unit_sign(w[i]);
    S aligned(0);
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (!is_zero(T(i, y)) && sign_of(T(i, y)) == si * sign_of(gt[y])) aligned += abs_of(T(i, y));
    if (sign_of(aligned) > 0) {
      for (std::size_t y = 0; y < m.cols(); ++y)
        m(i, y) = (!is_zero(T(i, y)) && sign_of(T(i, y)) == si * sign_of(gt[y]))
                      ? S(T(i, y) * dom.weight(i) / aligned)
                      : S(0);
    } else {
      for (auto& x : m.row(i)) x = S(0);
      m(i, 0) = S(si) * gt[0] * dom.weight(i);
    }
  }
  KernelMeasure<S> Sop(dom, T.codomain(), std::move(m));
  return max_of(l1_distance(dom, f, w), operator_distance(T, Sop));
}

// For each (t, σ): atoms of supp f ordered by cost |h(i,t) − σ·sign f(i)|,
// with the masses of f. Calls visit(cost_k, mass_off_k) for k = 0..|supp f|.
template <Scalar S, class Visit>
void column_scan(const Density<S>& f, const SupKernel<S>& T, Visit visit) {
  const MeasureSpace<S>& dom = T.domain();
  const AtomSet supp = support_of(f);
  for (std::size_t t = 0; t < T.codomain_atoms(); ++t) {
    for (int sigma : {1, -1}) {
      std::vector<std::pair<S, std::size_t>> costs;
      for (std::size_t i : supp) costs.emplace_back(abs_of(S(T(i, t) - S(sigma * sign_of(f[i])))), i);
      std::sort(costs.begin(), costs.end());
      S off = l1_norm(dom, f);
      visit(S(0), off, std::size_t{0});
      for (std::size_t k = 0; k < costs.size(); ++k) {
        off -= dom.weight(costs[k].second) * abs_of(f[costs[k].second]);
        visit(costs[k].first, off, k + 1);
      }
    }
  }
}

}  // namespace

template <Scalar S>
S brute_norm(const KernelMeasure<S>& T) {
  return extreme_point_max(T.domain(), [&](const Density<S>& e) { return l1_norm(T.codomain(), apply_l1l1(T, e)); });
}

template <Scalar S>
S brute_norm(const SupKernel<S>& T) {
  return extreme_point_max(T.domain(), [&](const Density<S>& e) { return max_abs(apply_l1linf(T, e)); });
}

template <Scalar S>
S brute_norm(const SumOperator<S>& T) {
  S best(0);
  for (const auto& c : T.components()) best = max_of(best, brute_norm(c.kernel));
  return best;
}

template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const KernelMeasure<S>& op) {
  require_aligned(op.domain(), g, "certify_pi");
  const Density<S> image = apply_l1l1(op, g);
  PiCertificate<S> c = base_certificate(g, op.domain(), brute_norm(op), l1_norm(op.codomain(), image));
  c.witness_functional = norming_functional(image);
  return c;
}

template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const SupKernel<S>& op) {
  require_aligned(op.domain(), g, "certify_pi");
  const std::vector<S> image = apply_l1linf(op, g);
  PiCertificate<S> c = base_certificate(g, op.domain(), brute_norm(op), max_abs(image));
  c.witness_atom = argmax_abs(image);
  return c;
}

template <Scalar S>
PiCertificate<S> certify_pi(const Density<S>& g, const SumOperator<S>& op) {
  require_aligned(op.domain(), g, "certify_pi");
  std::size_t best_j = 0;
  S best(-1);
  for (std::size_t j = 0; j < op.size(); ++j) {
    S n = max_abs(apply_l1linf(op.component(j).kernel, g));
    if (n > best) {
      best = n;
      best_j = j;
    }
  }
  PiCertificate<S> c = base_certificate(g, op.domain(), brute_norm(op), best);
  c.witness_atom = argmax_abs(apply_l1linf(op.component(best_j).kernel, g));
  c.witness_component = best_j;
  return c;
}

template <Scalar S>
S dist_to_pi(const Density<S>& f, const KernelMeasure<S>& T, std::size_t budget, std::uint64_t seed,
             const std::vector<S>& extra_eps) {
  if (certify_pi(f, T).attained) return S(0);
  const std::size_t n = T.domain().size();
  S best(2);  // (0, T') with T' attaining is always within 2 of (f, T)

  for (const S& e : ladder_with(fractions<S>({{9, 10}, {1, 2}, {1, 4}, {1, 10}}), extra_eps)) {
    try {
      consider_report(best, repair_l1l1(T, f, e));
    } catch (const Error&) {
    }
  }

  AtomSet current = support_of(f);
  if (current.empty()) current = complement(AtomSet{}, n);
  S current_value = kernel_candidate(f, T, current);
  auto offer = [&](const AtomSet& I) {
    S v = kernel_candidate(f, T, I);
    if (v < current_value) {
      current_value = v;
      current = I;
    }
  };
  offer(complement(AtomSet{}, n));
  for (std::size_t i = 0; i < n; ++i) offer(AtomSet{i});

  Rng rng(seed);
  for (std::size_t it = 0; it < budget; ++it) {
    const std::size_t a = rng.index(n);
    AtomSet next = current;
    auto pos = std::lower_bound(next.begin(), next.end(), a);
    if (pos != next.end() && *pos == a) next.erase(pos);
    else next.insert(pos, a);
    if (!next.empty()) offer(next);
  }
  return std::min(best, current_value);
}

template <Scalar S>
S dist_to_pi(const Density<S>& f, const SupKernel<S>& T, std::size_t budget, std::uint64_t seed,
             const std::vector<S>& extra_eps) {
  (void)budget;
  (void)seed;
  if (certify_pi(f, T).attained) return S(0);
  S best(2);
  const std::vector<S> ladder = ladder_with(fractions<S>({{9, 10}, {1, 2}, {1, 4}, {1, 10}}), extra_eps);
  const std::vector<S> linf_ladder =
      ladder_with(fractions<S>({{3, 10}, {1, 10}, {1, 20}, {1, 100}}), ladder_with(std::vector<S>{}, extra_eps));
  for (const S& e : ladder) {
    try {
      consider_report(best, clamp_repair(T, f, e));
    } catch (const Error&) {
    }
    try {
      consider_report(best, bump_repair(T, f, e));
    } catch (const Error&) {
    }
  }
  for (const S& e : linf_ladder) {
    if (!(e < S(1) / S(3))) continue;
    try {
      consider_report(best, repair_l1linf(T, f, e));
    } catch (const Error&) {
    }
  }
  column_scan(f, T, [&](const S& cost, const S& off, std::size_t k) {
    if (k == 0) return;
    S v = max_of(cost, S(2 * off));
    if (v < best) best = v;
  });
  return best;
}

template <Scalar S>
S dist_to_pi_lower(const Density<S>& f, const KernelMeasure<S>& T) {
  S bound = (S(1) - image_norm(T, f)) / S(2);
  const std::vector<S> dens = marginal_density(T);
  std::vector<std::size_t> order(dens.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dens[b] < dens[a]; });
  S off = l1_norm(T.domain(), f);
  S support_bound(2);
  for (std::size_t i : order) {
    off -= T.domain().weight(i) * abs_of(f[i]);
    S v = max_of(S(S(1) - dens[i]), S(2 * off));
    if (v < support_bound) support_bound = v;
  }
  return max_of(bound, support_bound);
}

template <Scalar S>
S dist_to_pi_lower(const Density<S>& f, const SupKernel<S>& T) {
  S bound = (S(1) - image_norm(T, f)) / S(2);
  S support_bound(2);
  column_scan(f, T, [&](const S& cost, const S& off, std::size_t k) {
    if (k == 0) return;
    S v = max_of(cost, S(2 * off));
    if (v < support_bound) support_bound = v;
  });
  return max_of(bound, support_bound);
}

template <Scalar S>
UniversalityResult check_attainment_universality(const MeasureSpace<S>& space, const CellSet& M,
                                                 const Density<S>& g0) {
  require_aligned(space, g0, "check_attainment_universality");
  std::vector<Cell> free;
  for (std::size_t w = 0; w < M.rows(); ++w)
    for (std::size_t t = 0; t < M.cols(); ++t)
      if (!M.contains(w, t)) free.emplace_back(w, t);
  if (free.size() > 12) throw PreconditionError("check_attainment_universality: more than 12 cells outside M");

  UniversalityResult out;
  std::vector<int> phi(free.size(), -1);
  const SupKernel<S> base = indicator_kernel(space, M);
  while (true) {
    Matrix<S> h = base.values();
    for (std::size_t k = 0; k < free.size(); ++k) h(free[k].first, free[k].second) = S(phi[k]);
    const S n = max_abs(apply_l1linf(SupKernel<S>(space, std::move(h)), g0));
    ++out.checked;
    if (!equals(n, S(1))) ++out.failures;
    std::size_t k = 0;
    while (k < phi.size() && phi[k] == 1) phi[k++] = -1;
    if (k == phi.size()) break;
    ++phi[k];
  }
  return out;
}

template <Scalar S>
S proven_bound(Law law, const S& eps) {
  switch (law) {
    case Law::l1l1: return l1l1_defect(eps);
    case Law::l1linf: return l1linf_defect(S(eps / S(10)));
    case Law::ck_clamp: return clamp_defect(eps);
    case Law::ck_bump: return bump_defect(eps);
    case Law::linf_sum: break;
  }
  throw PreconditionError("proven_bound: no single bound for ℓ∞-sums");
}

namespace {

template <Scalar S>
struct SampleResult {
  S defect;
  S est;
  S lower;
};

template <Scalar S>
SampleResult<S> evaluate_sample(Law law, const S& eps, std::size_t rows, std::size_t cols, std::size_t index,
                                std::uint64_t seed, std::size_t budget) {
  const std::uint64_t sample_seed = splitmix64(seed) ^ index;
  Rng rng(sample_seed);
  const std::vector<S> extra{eps, S(eps / S(10))};
  const bool near = index % 2 == 1;
  Rational t(1);
  if (near) t = Rational(mpz_class(1), mpz_class(1) << static_cast<unsigned long>(rng.integer(1, 120)));

  if (law == Law::l1l1) {
    KernelMeasure<Rational> Tq = random_kernel(rng, random_space(rng, rows), random_space(rng, cols));
    Density<Rational> fq = random_unit_density(rng, Tq.domain(), false);
    if (near) {
      auto base = attaining_l1_pair(rng, rows, cols);
      std::tie(Tq, fq) = perturb_l1_pair(rng, base.first, base.second, t);
    }
    const KernelMeasure<S> T = scalar_cast<S>(Tq);
    const Density<S> f = scalar_cast<S>(fq);
    return {S(S(1) - image_norm(T, f)), dist_to_pi(f, T, budget, sample_seed, extra), dist_to_pi_lower(f, T)};
  }
  SupKernel<Rational> Tq = random_sup_kernel(rng, random_space(rng, rows), cols);
  Density<Rational> fq = random_unit_density(rng, Tq.domain(), false);
  if (near) {
    auto base = attaining_sup_pair(rng, rows, cols);
    std::tie(Tq, fq) = perturb_sup_pair(rng, base.first, base.second, t);
  }
  const SupKernel<S> T = scalar_cast<S>(Tq);
  const Density<S> f = scalar_cast<S>(fq);
  return {S(S(1) - image_norm(T, f)), dist_to_pi(f, T, budget, sample_seed, extra), dist_to_pi_lower(f, T)};
}

}  // namespace

template <Scalar S>
ModulusEstimate<S> empirical_modulus(Law law, const S& eps, std::size_t rows, std::size_t cols, std::size_t samples,
                                     std::uint64_t seed, std::size_t budget) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("empirical_modulus: requires 0 < ε < 1");
  if (rows == 0 || cols == 0) throw PreconditionError("empirical_modulus: dimensions must be positive");
  if (law == Law::linf_sum) throw PreconditionError("empirical_modulus: unsupported family");

  std::vector<std::optional<SampleResult<S>>> results(samples);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < samples; i = next++) {
      try {
        results[i] = evaluate_sample(law, eps, rows, cols, i, seed, budget);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 32);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  ModulusEstimate<S> out{eps, samples, 0, 0, std::nullopt, proven_bound(law, eps), {}};
  for (std::size_t i = 0; i < samples; ++i) {
    const SampleResult<S>& r = *results[i];
    const bool accepted = !(r.est < eps);
    out.rows.push_back({i, to_string(r.defect), to_string(r.est), to_string(r.lower), accepted});
    if (!accepted) continue;
    ++out.accepted;
    if (!(r.lower < eps)) ++out.certified_far;
    if (!out.min_defect || r.defect < *out.min_defect) out.min_defect = r.defect;
  }
  return out;
}

#define BPB_INSTANTIATE_ORACLE(S)                                                                            \
  template S brute_norm(const KernelMeasure<S>&);                                                            \
  template S brute_norm(const SupKernel<S>&);                                                                \
  template S brute_norm(const SumOperator<S>&);                                                              \
  template PiCertificate<S> certify_pi(const Density<S>&, const KernelMeasure<S>&);                          \
  template PiCertificate<S> certify_pi(const Density<S>&, const SupKernel<S>&);                              \
  template PiCertificate<S> certify_pi(const Density<S>&, const SumOperator<S>&);                            \
  template S dist_to_pi(const Density<S>&, const KernelMeasure<S>&, std::size_t, std::uint64_t,              \
                        const std::vector<S>&);                                                              \
  template S dist_to_pi(const Density<S>&, const SupKernel<S>&, std::size_t, std::uint64_t,                  \
                        const std::vector<S>&);                                                              \
  template S dist_to_pi_lower(const Density<S>&, const KernelMeasure<S>&);                                   \
  template S dist_to_pi_lower(const Density<S>&, const SupKernel<S>&);                                       \
  template UniversalityResult check_attainment_universality(const MeasureSpace<S>&, const CellSet&,          \
                                                            const Density<S>&);                              \
  template S proven_bound(Law, const S&);                                                                    \
  template ModulusEstimate<S> empirical_modulus(Law, const S&, std::size_t, std::size_t, std::size_t,        \
                                                std::uint64_t, std::size_t);

BPB_INSTANTIATE_ORACLE(Rational)
BPB_INSTANTIATE_ORACLE(double)

}  // namespace bpb
