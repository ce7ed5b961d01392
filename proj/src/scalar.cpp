// SPDX-License-Identifier: Apache-2.0
#include "bpb/scalar.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <cstdio>

#include "bpb/errors.hpp"

namespace bpb {

namespace {

std::atomic<double> g_slack{default_approx_slack};

// ⌊√(num·den·4ᵏ)⌋ / (den·2ᵏ), rounded up on request. k is chosen so the
// integer square root carries at least 80 significant bits.
Rational sqrt_bracket(const Rational& v, bool upper) {
  if (sgn(v) <= 0) return Rational(0);
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  mpz_class prod = num * den;
  std::size_t bits = mpz_sizeinbase(prod.get_mpz_t(), 2);
  unsigned long shift = bits < 160 ? (160 - bits) / 2 + 1 : 0;
  mpz_class scaled;
  mpz_mul_2exp(scaled.get_mpz_t(), prod.get_mpz_t(), 2 * shift);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  if (upper && root * root != scaled) root += 1;
  mpz_class scaled_den;
  mpz_mul_2exp(scaled_den.get_mpz_t(), den.get_mpz_t(), shift);
  Rational result(root, scaled_den);
  result.canonicalize();
  return result;
}

}  // namespace

std::string_view mode_name(ScalarMode mode) {
  return mode == ScalarMode::exact ? "exact" : "approx";
}

ScalarMode parse_mode(std::string_view text) {
  if (text == "exact") return ScalarMode::exact;
  if (text == "approx") return ScalarMode::approx;
  throw ParseError("unknown scalar mode '" + std::string(text) + "' (expected exact|approx)");
}

double approx_slack() noexcept { return g_slack.load(std::memory_order_relaxed); }

void set_approx_slack(double tau) {
  if (!(tau >= 0.0)) throw DomainError("approx slack must be nonnegative");
  g_slack.store(tau, std::memory_order_relaxed);
}

bool below_sqrt(const Rational& x, const Rational& v) {
  if (sgn(x) < 0) return sgn(v) >= 0;
  return x * x < v;
}

bool below_sqrt(double x, double v) { return x < std::sqrt(v) - approx_slack(); }

Rational sqrt_upper(const Rational& v) { return sqrt_bracket(v, true); }

double sqrt_upper(double v) { return std::sqrt(v); }

double to_double(const Rational& x) {
  // mpq_get_d truncates toward zero; step to the nearest double so that
  // decimal text written by the JSON layer reads back to the same value.
  const double d = x.get_d();
  if (!std::isfinite(d)) return d;
  const double away = std::nextafter(d, x < 0 ? -HUGE_VAL : HUGE_VAL);
  if (!std::isfinite(away)) return d;
  const Rational lo = abs(x - Rational(d)), hi = abs(Rational(away) - x);
  if (hi < lo) return away;
  if (lo < hi) return d;
  std::int64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  return bits % 2 == 0 ? d : away;
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
  return std::string(buf, ptr);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) -> Rational {
    throw ParseError("malformed rational '" + std::string(text) + "': " + why);
  };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) return fail("empty");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num, den;
    std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
    if (ns.empty() || ds.empty()) return fail("missing numerator or denominator");
    if (ns[0] == '+') ns = ns.substr(1);
    if (num.set_str(ns, 10) != 0 || den.set_str(ds, 10) != 0) return fail("not an integer ratio");
    if (sgn(den) == 0) return fail("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    seen_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      ++frac_digits;
      seen_digit = true;
    }
  }
  if (!seen_digit) return fail("no digits");
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::string_view rest(s.data() + i, s.size() - i);
    if (!rest.empty() && rest[0] == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) return fail("bad exponent");
    i = s.size();
  }
  if (i != s.size()) return fail("trailing characters");
  if (exponent > 4000 || exponent < -4000) return fail("exponent out of range");

  mpz_class mantissa(digits, 10);
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

}  // namespace bpb
