#pragma once

// Exact rational scalars backed by GMP, plus the parsing/printing helpers
// shared by the problem-file and certificate formats.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <optional>
#include <string>

namespace fracbil {

using Rational = mpq_class;

// mpq_get_d truncates toward zero; round to the nearest double instead by
// comparing the truncated value and its ulp neighbours exactly.
inline double to_double(const Rational& r) {
  double a = r.get_d();
  if (!std::isfinite(a)) return a;
  double best = a;
  Rational best_err = abs(Rational(a) - r);
  for (double c : {std::nextafter(a, HUGE_VAL), std::nextafter(a, -HUGE_VAL)}) {
    Rational err = abs(Rational(c) - r);
    if (err < best_err) {
      best_err = err;
      best = c;
    }
  }
  return best;
}

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline int sign(const Rational& r) { return sgn(r); }

// Accepts "12", "-3.25", "+7/2", "-1/3". Decimal digits become an exact
// power-of-ten denominator; no exponent notation.
inline std::optional<Rational> parse_rational(const std::string& text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
    return i > start;
  };

  bool negative = false;
  if (i < n && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';

  std::string int_part;
  if (!digits(int_part)) return std::nullopt;

  mpz_class num(int_part);
  mpz_class den(1);

  if (i < n && text[i] == '.') {
    ++i;
    std::string frac_part;
    if (!digits(frac_part)) return std::nullopt;
    for (char c : frac_part) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  } else if (i < n && text[i] == '/') {
    ++i;
    std::string den_part;
    if (!digits(den_part)) return std::nullopt;
    den = mpz_class(den_part);
    if (den == 0) return std::nullopt;
  }
  if (i != n) return std::nullopt;

  Rational r(num, den);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

// Integers print bare, denominators dividing a power of ten print as a
// decimal, everything else prints as "p/q". All three forms reparse exactly.
inline std::string format_rational(const Rational& r) {
  mpz_class num = r.get_num();
  mpz_class den = r.get_den();
  if (den == 1) return num.get_str();

  mpz_class d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  int places = std::max(twos, fives);
  if (d == 1 && places <= 12) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    mpz_class scaled = num * (scale / den);
    bool neg = scaled < 0;
    mpz_class mag = abs(scaled);
    std::string body = mag.get_str();
    if (static_cast<int>(body.size()) <= places) body.insert(0, places + 1 - body.size(), '0');
    body.insert(body.size() - places, ".");
    return neg ? "-" + body : body;
  }
  return num.get_str() + "/" + den.get_str();
}

}  // namespace fracbil
