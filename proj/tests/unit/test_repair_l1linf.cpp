// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace bpb;
using fx::dens;
using fx::q;
using fx::space;
using fx::sup;

TEST_CASE("cell sets") {
  CellSet M(2, 3);
  CHECK(M.count() == 0);
  M.insert(1, 2);
  CHECK(M.contains(1, 2));
  CHECK_FALSE(M.contains(0, 2));
  CHECK_THROWS_AS(M.insert(2, 0), IndexError);
  CHECK(CellSet::full(2, 3).count() == 6);
  CHECK(CellSet::from_cells(2, 3, {{0, 0}, {1, 2}}).cells() == std::vector<Cell>{{0, 0}, {1, 2}});
  const auto chi = indicator_kernel(space({"1/2", "1/2"}), CellSet::from_cells(2, 3, {{0, 1}}));
  CHECK(chi.values() == fx::mat({{"0", "1", "0"}, {"0", "0", "0"}}));
}

TEST_CASE("attainment set on the full cell set") {
  const auto mu = space({"1/2", "1/2"});
  for (const char* e : {"1/10", "1/2", "9/10"}) {
    auto w = density_point_attain(mu, CellSet::full(2, 2), dens({"1", "1"}), q(e));
    CHECK(w.g0 == dens({"1", "1"}));
    CHECK(w.y0 == 0);
  }
}

TEST_CASE("attainment set on a column containing the support") {
  const auto mu = space({"1/2", "1/2"});
  auto w = density_point_attain(mu, CellSet::from_cells(2, 2, {{0, 0}, {1, 0}}), dens({"2", "0"}), q("1/4"));
  CHECK(w.g0 == dens({"2", "0"}));
  CHECK(w.y0 == 0);
}

TEST_CASE("attainment set omitting a low-mass cell is universal") {
  // f₀ puts 1/40 of its mass on atom 2, whose cell (2, 0) is left out of M.
  const auto mu = space({"1/3", "1/3", "1/3"});
  const auto f0 = dens({"3/2", "57/40", "3/40"});
  REQUIRE(l1_norm(mu, f0) == 1);
  const auto M = CellSet::from_cells(3, 2, {{0, 0}, {1, 0}, {0, 1}});
  const Rational eps = q("1/4");
  auto w = density_point_attain(mu, M, f0, eps);
  CHECK(w.y0 == 0);
  CHECK(is_unit(mu, w.g0));
  CHECK(is_nonnegative(w.g0));
  CHECK(below_sqrt(l1_distance(mu, f0, w.g0), Rational(16 * eps)));
  CHECK(apply_l1linf(indicator_kernel(mu, M), w.g0)[w.y0] == 1);
  for (std::size_t i : support_of(w.g0)) CHECK(M.contains(i, w.y0));
  auto u = check_attainment_universality(mu, M, w.g0);
  CHECK(u.checked == 27);  // 3 cells outside M
  CHECK(u.failures == 0);
}

TEST_CASE("attainment set gate") {
  const auto mu = space({"1/2", "1/2"});
  const auto M = CellSet::from_cells(2, 2, {{0, 0}});
  // χ̂_M f₀ = (1/2, 0)
  CHECK_THROWS_AS(density_point_attain(mu, M, dens({"1", "1"}), q("1/2")), GateError);
  CHECK_NOTHROW(density_point_attain(mu, M, dens({"1", "1"}), q("3/5")));
}

TEST_CASE("sup repair leaves the all-ones kernel alone") {
  const auto T = sup({"1/2", "1/2"}, {{"1", "1"}, {"1", "1"}});
  auto r = repair_l1linf(T, dens({"1", "1"}), q("3/10"));
  CHECK(r.op == T);
  CHECK(r.g == dens({"1", "1"}));
  CHECK(r.witness.atom == std::optional<std::size_t>(0));
  CHECK(r.witness.value == 1);
}

TEST_CASE("sup repair conjugates signs") {
  const auto T = sup({"1/2", "1/2"}, {{"-1", "0"}, {"1", "0"}});
  auto r = repair_l1linf(T, dens({"-1", "1"}), q("3/10"));
  CHECK(r.op == T);
  CHECK(r.g == dens({"-1", "1"}));
  CHECK(r.witness.atom == std::optional<std::size_t>(0));
  CHECK(abs(r.witness.value) == 1);
}

TEST_CASE("sup repair on the 1 − 10⁻⁵ kernel") {
  const auto T = sup({"1/2", "1/2"}, {{"1", "0"}, {"99999/100000", "0"}});
  CHECK(image_norm(T, dens({"1", "1"})) == q("199999/200000"));
  auto r = repair_l1linf(T, dens({"1", "1"}), q("3/10"));
  CHECK(r.op.values() == fx::mat({{"1", "0"}, {"1", "0"}}));
  CHECK(r.witness.atom == std::optional<std::size_t>(0));
  CHECK(r.dist_operator == q("1/100000"));
  CHECK(r.g == dens({"1", "1"}));
  CHECK(certify_pi(r.g, r.op).attained);
}

TEST_CASE("sup repair preconditions") {
  const auto T = sup({"1/2", "1/2"}, {{"1", "1"}, {"1", "1"}});
  CHECK_THROWS_AS(repair_l1linf(T, dens({"1", "1"}), q("1/3")), PreconditionError);
  CHECK_THROWS_AS(repair_l1linf(T, dens({"1", "1"}), q("0")), PreconditionError);
  const auto U = sup({"1/2", "1/2"}, {{"1", "0"}, {"9/10", "0"}});
  CHECK_THROWS_AS(repair_l1linf(U, dens({"1", "1"}), q("3/10")), GateError);
}

TEST_CASE("property: gated sup instances repair within 2ε and 10ε") {
  Rng rng(99);
  for (int it = 0; it < 60; ++it) {
    const Rational eps = it % 2 ? q("3/10") : q("1/5");
    const std::size_t rows = 1 + rng.index(5), cols = 1 + rng.index(5);
    auto [T, f] = gated_sup_instance(rng, rows, cols, l1linf_defect(eps));
    CAPTURE(it);
    auto r = repair_l1linf(T, f, eps);
    CHECK(certify_pi(r.g, r.op).attained);
    CHECK(r.dist_operator < 2 * eps);
    CHECK(r.dist_vector < 10 * eps);
    CHECK(abs(apply_l1linf(r.op, r.g)[*r.witness.atom]) == 1);
  }
}

TEST_CASE("property: one-point K behaves as the scalar case") {
  Rng rng(7);
  for (int it = 0; it < 40; ++it) {
    const Rational eps = q("3/10");
    auto [T, f] = gated_sup_instance(rng, 1 + rng.index(4), 1, l1linf_defect(eps));
    auto r = repair_l1linf(T, f, eps);
    CHECK(r.witness.atom == std::optional<std::size_t>(0));
    CHECK(abs(r.witness.value) == 1);
    CHECK(r.dist_operator < 2 * eps);
    CHECK(r.dist_vector < 10 * eps);

    // Functional gate |x*(x)| > 1 − ε²/4 gives both distances below ε.
    auto [U, g] = gated_sup_instance(rng, 1 + rng.index(4), 1, bump_defect(eps));
    auto b = bump_repair(U, g, eps);
    CHECK(abs(b.witness.value) == 1);
    CHECK(b.dist_operator < eps);
    CHECK(b.dist_vector < eps);
  }
}

TEST_CASE("property: attainment sets are universal on random small cell sets") {
  Rng rng(13);
  int built = 0;
  for (int it = 0; it < 200 && built < 40; ++it) {
    const std::size_t rows = 1 + rng.index(3), cols = 1 + rng.index(3);
    const auto mu = random_space(rng, rows);
    CellSet M(rows, cols);
    for (std::size_t w = 0; w < rows; ++w)
      for (std::size_t t = 0; t < cols; ++t)
        if (rng.index(3) != 0) M.insert(w, t);
    const auto f0 = random_unit_density(rng, mu, true);
    const Rational eps = fx::frac(static_cast<long>(rng.integer(1, 9)), 10);
    try {
      auto w = density_point_attain(mu, M, f0, eps);
      ++built;
      CHECK(below_sqrt(l1_distance(mu, f0, w.g0), Rational(16 * eps)));
      CHECK(check_attainment_universality(mu, M, w.g0).failures == 0);
    } catch (const GateError&) {
    }
  }
  CHECK(built >= 20);
}
