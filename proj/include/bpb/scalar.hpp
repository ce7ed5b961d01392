// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace bpb {

using Rational = mpq_class;

// The two supported scalar fields. Rational is the exact mode, double the
// approximate mode used for large sampling runs.
template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, double>;

enum class ScalarMode { exact, approx };

std::string_view mode_name(ScalarMode mode);
ScalarMode parse_mode(std::string_view text);

template <Scalar S>
constexpr ScalarMode mode_of() {
  return std::same_as<S, Rational> ? ScalarMode::exact : ScalarMode::approx;
}

// Comparison slack τ applied to every threshold test in approx mode.
inline constexpr double default_approx_slack = 1e-12;
double approx_slack() noexcept;
void set_approx_slack(double tau);

inline Rational abs_of(const Rational& x) { return abs(x); }
inline double abs_of(double x) { return std::fabs(x); }

inline int sign_of(const Rational& x) { return sgn(x); }
inline int sign_of(double x) { return (x > 0) - (x < 0); }

// Sign with zero mapped to +1.
template <Scalar S>
int unit_sign(const S& x) {
  return sign_of(x) < 0 ? -1 : 1;
}

// Strict threshold tests. Approx mode shifts every threshold against the
// caller so that borderline values fail.
inline bool exceeds(const Rational& x, const Rational& t) { return x > t; }
inline bool exceeds(double x, double t) { return x > t + approx_slack(); }

inline bool below(const Rational& x, const Rational& t) { return x < t; }
inline bool below(double x, double t) { return x < t - approx_slack(); }

inline bool at_most(const Rational& x, const Rational& t) { return x <= t; }
inline bool at_most(double x, double t) { return x <= t + approx_slack(); }

inline bool equals(const Rational& x, const Rational& y) { return x == y; }
inline bool equals(double x, double y) { return std::fabs(x - y) <= approx_slack(); }

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

// x < √v for v ≥ 0, decided exactly for rationals by squaring.
bool below_sqrt(const Rational& x, const Rational& v);
bool below_sqrt(double x, double v);

// x > 1 − √v.
template <Scalar S>
bool exceeds_one_minus_sqrt(const S& x, const S& v) {
  return below_sqrt(S(S(1) - x), v);
}

// A value u ≥ √v. Exact mode returns a rational within relative 2⁻⁶⁴ of √v
// (and √v itself when v is a perfect square).
Rational sqrt_upper(const Rational& v);
double sqrt_upper(double v);

template <Scalar S>
S power(const S& base, unsigned exponent) {
  S result(1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

double to_double(const Rational& x);
inline double to_double(double x) { return x; }

// "p/q" (or "p") for rationals, shortest round-trip decimal for doubles.
std::string to_string(const Rational& x);
std::string to_string(double x);

// Accepts "p/q", integers and decimal literals such as "0.125" or "1e-3".
// Rationals parse exactly; doubles go through the exact rational value.
Rational parse_rational(std::string_view text);

template <Scalar S>
S parse_scalar(std::string_view text) {
  if constexpr (std::same_as<S, Rational>) {
    return parse_rational(text);
  } else {
    return to_double(parse_rational(text));
  }
}

template <Scalar To>
To scalar_cast(const Rational& x) {
  if constexpr (std::same_as<To, Rational>) {
    return x;
  } else {
    return to_double(x);
  }
}

template <Scalar To>
To scalar_cast(double x) {
  if constexpr (std::same_as<To, double>) {
    return x;
  } else {
    return Rational(x);
  }
}

}  // namespace bpb
