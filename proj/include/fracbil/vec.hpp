#pragma once

// Small dense vector helpers. Dimensions here are desk scale (<= 4), so
// everything is plain std::vector.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "rational.hpp"

namespace fracbil {

using Vec = std::vector<double>;
using QVec = std::vector<Rational>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double t, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0) return a;
  return (1.0 / n) * a;
}

inline bool is_zero(const Vec& a, double tol = 0) {
  for (double v : a)
    if (std::fabs(v) > tol) return false;
  return true;
}

inline bool is_zero(const QVec& a) {
  for (const Rational& v : a)
    if (v != 0) return false;
  return true;
}

inline Vec to_vec(const QVec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = to_double(a[i]);
  return r;
}

// Doubles are exact binary rationals, so this conversion is lossless.
inline QVec to_qvec(const Vec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = Rational(a[i]);
  return r;
}

inline std::string format_vec(const Vec& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ", ";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a[i]);
    s += buf;
  }
  return s + ")";
}

inline std::string format_vec(const QVec& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(a[i]);
  }
  return s + ")";
}

}  // namespace fracbil
