// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace bpb;
using fx::dens;
using fx::kernel;
using fx::q;
using fx::space;
using fx::sup;

TEST_CASE("kernel norm is the largest marginal density") {
  CHECK(kernel_norm(kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "1/2"}})) == 1);
  const auto T = kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "3/8"}});
  CHECK(kernel_norm(T) == 1);
  CHECK(marginal_density(T) == fx::qs({"1", "3/4"}));
  const auto U = kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/4", "1/4"}, {"0", "1/2"}});
  CHECK(kernel_norm(U) == 1);
  CHECK(brute_norm(U) == 1);
}

TEST_CASE("L1 to L1 application") {
  const auto T = kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "1/2"}});
  CHECK(apply_l1l1(T, dens({"2", "0"})) == dens({"2", "0"}));
  CHECK(image_norm(T, dens({"2", "0"})) == 1);
  CHECK(apply_l1l1(T, dens({"1", "1"})) == dens({"1", "1"}));
  const auto U = kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "-1/2"}});
  CHECK(apply_l1l1(U, dens({"1", "1"})) == dens({"1", "-1"}));
  CHECK_THROWS_AS(apply_l1l1(T, dens({"1"})), AlignmentError);
}

TEST_CASE("sup kernels") {
  const auto mu = space({"1/2", "1/2"});
  CHECK(sup_norm(sup({"1/2", "1/2"}, {{"1", "0"}, {"1", "0"}})) == 1);
  CHECK(sup_norm(sup({"1/2", "1/2"}, {{"1/2", "1/2"}, {"1/2", "1/2"}})) == q("1/2"));
  const auto H = sup({"1/2", "1/2"}, {{"1", "0"}, {"23/24", "0"}});
  CHECK(sup_norm(H) == 1);
  CHECK(apply_l1linf(sup({"1/2", "1/2"}, {{"1", "0"}, {"1", "0"}}), dens({"1", "1"})) == fx::qs({"1", "0"}));
  CHECK(apply_l1linf(H, dens({"1", "1"})) == fx::qs({"47/48", "0"}));
  CHECK(apply_l1linf(sup({"1/2", "1/2"}, {{"1", "0"}, {"1", "0"}}), dens({"2", "0"})) == fx::qs({"1", "0"}));
  CHECK(adjoint_point(sup({"1/2", "1/2"}, {{"1", "0"}, {"1", "0"}}), 0) == fx::qs({"1", "1"}));
  CHECK(adjoint_point(sup({"1/2", "1/2"}, {{"1", "0"}, {"1", "0"}}), 1) == fx::qs({"0", "0"}));
  CHECK(adjoint_point(H, 0) == fx::qs({"1", "23/24"}));
  CHECK_THROWS_AS(adjoint_point(H, 2), IndexError);
  CHECK(argmax_abs(fx::qs({"1/2", "-1", "1"})) == 1);
}

TEST_CASE("property: norm formulas agree with extreme points, duality and linearity") {
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    const auto dom = random_space(rng, 1 + rng.index(5));
    const auto cod = random_space(rng, 1 + rng.index(5));
    const auto T = random_kernel(rng, dom, cod);
    CHECK(kernel_norm(T) == brute_norm(T));
    const auto H = random_sup_kernel(rng, dom, cod.size());
    CHECK(sup_norm(H) == brute_norm(H));

    const auto f = random_unit_density(rng, dom, false);
    const auto e = random_unit_density(rng, dom, false);
    std::vector<Rational> gv;
    for (std::size_t j = 0; j < cod.size(); ++j) gv.push_back(rng.signed_fraction(4));
    const DualVector<Rational> g(gv);
    CHECK(abs(pairing(T, f, g)) <= kernel_norm(T) * l1_norm(dom, f));

    const Rational a = rng.signed_fraction(7);
    Density<Rational> comb = f;
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = f[i] + a * e[i];
    const auto Tf = apply_l1l1(T, f), Te = apply_l1l1(T, e), Tc = apply_l1l1(T, comb);
    for (std::size_t j = 0; j < cod.size(); ++j) CHECK(Tc[j] == Tf[j] + a * Te[j]);
    const auto Hf = apply_l1linf(H, f), He = apply_l1linf(H, e), Hc = apply_l1linf(H, comb);
    for (std::size_t t = 0; t < Hc.size(); ++t) CHECK(Hc[t] == Hf[t] + a * He[t]);
  }
}

TEST_CASE("norming functional and conjugation") {
  const auto img = dens({"-1/2", "0", "3"});
  CHECK(norming_functional(img).values == fx::qs({"-1", "1", "1"}));
  const auto T = kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "1/2"}});
  const SignVector s({-1, 1});
  const auto C = conjugate(T, s);
  CHECK(apply_l1l1(C, s.apply(dens({"1", "1"}))) == apply_l1l1(T, dens({"1", "1"})));
  CHECK(conjugate(C, s) == T);
}
