// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace bpb;
using fx::dens;
using fx::q;
using fx::space;

TEST_CASE("l1 norm") {
  CHECK(l1_norm(space({"1/2", "1/2"}), dens({"1", "1"})) == 1);
  CHECK(l1_norm(space({"1/2", "1/2"}), dens({"2", "0"})) == 1);
  CHECK(l1_norm(space({"1/3", "2/3"}), dens({"-3", "0"})) == 1);
  CHECK_THROWS_AS(l1_norm(space({"1/2", "1/2"}), dens({"1"})), AlignmentError);
}

TEST_CASE("measure spaces reject nonpositive or missing weights") {
  CHECK_THROWS_WITH_AS(space({"1/2", "0"}), "nonpositive atom weight", DomainError);
  CHECK_THROWS_AS(space({"-1"}), DomainError);
  CHECK_THROWS_AS(MeasureSpace<Rational>(std::vector<Rational>{}), DomainError);
}

TEST_CASE("sign normalization") {
  auto a = sign_normalize(dens({"-1", "1"}));
  CHECK(a.signs.signs() == std::vector<int>{-1, 1});
  CHECK(a.magnitude == dens({"1", "1"}));
  auto b = sign_normalize(dens({"2", "0"}));
  CHECK(b.signs.signs() == std::vector<int>{1, 1});
  CHECK(b.magnitude == dens({"2", "0"}));
  auto c = sign_normalize(dens({"-3", "-4"}));
  CHECK(c.signs.signs() == std::vector<int>{-1, -1});
  CHECK(c.magnitude == dens({"3", "4"}));
  CHECK(c.signs.apply(c.magnitude) == dens({"-3", "-4"}));
  CHECK_THROWS_AS(SignVector({1, 0}), DomainError);
}

TEST_CASE("band projection") {
  const auto sp = space({"1/2", "1/2"});
  auto a = band_project(sp, {0}, dens({"1", "1"}));
  CHECK(a.inside == dens({"1", "0"}));
  CHECK(a.outside == dens({"0", "1"}));
  auto b = band_project(sp, {0, 1}, dens({"2", "0"}));
  CHECK(b.inside == dens({"2", "0"}));
  CHECK(b.outside == dens({"0", "0"}));
  auto c = band_project(sp, {}, dens({"2", "0"}));
  CHECK(c.inside == dens({"0", "0"}));
  CHECK(c.outside == dens({"2", "0"}));
  CHECK_THROWS_AS(band_project(sp, {2}, dens({"1", "1"})), IndexError);
}

TEST_CASE("restrict and normalize") {
  const auto sp = space({"1/2", "1/2"});
  CHECK(restrict_normalize(sp, dens({"1", "1"}), {0}) == dens({"2", "0"}));
  CHECK(restrict_normalize(sp, dens({"2", "0"}), {0}) == dens({"2", "0"}));
  CHECK(restrict_normalize(sp, dens({"3/2", "1/2"}), {0}) == dens({"2", "0"}));
  CHECK_THROWS_AS(restrict_normalize(sp, dens({"0", "2"}), {0}), DegenerateRestriction);
}

TEST_CASE("property: sign and band identities on random densities") {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    const auto sp = random_space(rng, 1 + rng.index(6));
    const auto f = random_unit_density(rng, sp, false);
    const auto split = sign_normalize(f);
    CHECK(l1_norm(sp, split.magnitude) == l1_norm(sp, f));
    CHECK(split.signs.apply(split.magnitude) == f);
    CHECK(split.signs.apply(split.signs.apply(f)) == f);
    CHECK(is_nonnegative(split.magnitude));

    AtomSet band;
    for (std::size_t i = 0; i < sp.size(); ++i)
      if (rng.coin()) band.push_back(i);
    const auto bp = band_project(sp, band, f);
    CHECK(l1_norm(sp, f) == l1_norm(sp, bp.inside) + l1_norm(sp, bp.outside));
    for (std::size_t i = 0; i < sp.size(); ++i) CHECK(bp.inside[i] + bp.outside[i] == f[i]);
    if (mass_on(sp, f, band) > 0) {
      CHECK(is_unit(sp, restrict_normalize(sp, f, band)));
      CHECK(restrict_normalize(sp, restrict_normalize(sp, f, band), band) == restrict_normalize(sp, f, band));
    }
  }
}
