// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace bpb;
using fx::q;

TEST_CASE("rational parsing accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational(" 2/4 ") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("to_string round-trips exactly") {
  for (const char* s : {"0", "1", "-1/3", "511/1024", "16777216000"}) CHECK(to_string(q(s)) == s);
  CHECK(parse_rational(to_string(0.1)) == parse_rational("0.1"));
}

TEST_CASE("square-root comparisons are exact") {
  // 3·√(1/4) = 3/2
  CHECK(below_sqrt(q("3/2") - q("1/1000000"), q("9/4")));
  CHECK_FALSE(below_sqrt(q("3/2"), q("9/4")));
  CHECK(below_sqrt(q("-1"), q("0")));
  CHECK_FALSE(below_sqrt(q("0"), q("0")));
  for (const char* v : {"2", "1/3", "9/10", "1/1000"}) {
    const Rational u = sqrt_upper(q(v));
    CHECK(u * u >= q(v));
    CHECK(u * u - q(v) < q(v) / Rational(mpz_class(1) << 60));
  }
  CHECK(sqrt_upper(q("9/16")) == q("3/4"));
}

TEST_CASE("approx comparisons fail conservatively at the slack") {
  const double tau = approx_slack();
  CHECK(tau == doctest::Approx(1e-12));
  CHECK_FALSE(exceeds(1.0, 1.0));
  CHECK_FALSE(exceeds(1.0 + tau / 2, 1.0));
  CHECK(exceeds(1.0 + 4 * tau, 1.0));
  CHECK_FALSE(below(1.0 - tau / 2, 1.0));
  CHECK(equals(1.0, 1.0 + tau / 2));
  CHECK(exceeds(q("1") + Rational(1, 1000000000) * Rational(1, 1000000000), q("1")));
}

TEST_CASE("scalar modes parse by name") {
  CHECK(parse_mode("exact") == ScalarMode::exact);
  CHECK(parse_mode("approx") == ScalarMode::approx);
  CHECK(mode_name(ScalarMode::approx) == "approx");
  CHECK_THROWS_AS(parse_mode("float"), ParseError);
}

TEST_CASE("conversion to double rounds to nearest") {
  CHECK(to_double(parse_rational("0.45454545454545453")) == 0.45454545454545453);
  CHECK(to_double(parse_rational("0.1")) == 0.1);
  CHECK(to_double(parse_rational("-2/3")) == -2.0 / 3.0);
  CHECK(to_double(Rational(0)) == 0.0);
}
