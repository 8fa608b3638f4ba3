#pragma once

// Dense phase-1 simplex with Bland's rule, templated over the scalar so the
// same code runs in double (tolerance 1e-9) and in exact rationals
// (tolerance 0). Problems here are tiny: a handful of equality rows over a
// few dozen nonnegative variables.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace fracbil {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double tol() { return 1e-9; }
  static double abs(double v) { return v < 0 ? -v : v; }
};

template <>
struct ScalarTraits<Rational> {
  static Rational tol() { return Rational(0); }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <class S>
struct LpResult {
  bool feasible = false;
  std::vector<S> x;  // witness when feasible
};

// Feasibility of A x = b, x >= 0. Rows of A are dense; b may have any sign.
template <class S>
LpResult<S> solve_equality_feasibility(std::vector<std::vector<S>> A, std::vector<S> b) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A[0].size();
  const S tol = ScalarTraits<S>::tol();

  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("lp: ragged constraint matrix");
    if (b[i] < 0) {
      b[i] = -b[i];
      for (auto& v : A[i]) v = -v;
    }
  }

  // Tableau: n structural columns, m artificial columns, rhs.
  std::vector<std::vector<S>> t(m, std::vector<S>(n + m + 1, S(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = S(1);
    t[i][n + m] = b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Phase-1 objective row: minimize the artificial sum. With the artificial
  // basis the reduced cost of column j is sum_i t[i][j].
  std::vector<S> z(n + m + 1, S(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n + m; ++j) z[j] += t[i][j];
  for (std::size_t i = 0; i < m; ++i) z[n + i] = S(0);

  auto pivot = [&](std::size_t row, std::size_t col) {
    S p = t[row][col];
    for (auto& v : t[row]) v = v / p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      S f = t[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
    }
    S f = z[col];
    if (f != 0)
      for (std::size_t j = 0; j <= n + m; ++j) z[j] -= f * t[row][j];
    basis[row] = col;
  };

  const std::size_t max_iter = 2000 + 200 * (n + m);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iter) throw std::runtime_error("lp: iteration limit exceeded");

    // Bland: entering column is the smallest index with positive reduced cost.
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (z[j] > tol) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;

    // Ratio test; ties resolved toward the smallest basis index (Bland).
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= tol) continue;
      if (leave == m) {
        leave = i;
        continue;
      }
      S lhs = t[i][n + m] * t[leave][enter];
      S rhs = t[leave][n + m] * t[i][enter];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
    }
    if (leave == m) throw std::runtime_error("lp: phase-1 objective unbounded");
    pivot(leave, enter);
  }

  LpResult<S> result;
  if (z[n + m] > tol) return result;  // residual artificial mass: infeasible

  result.feasible = true;
  result.x.assign(n, S(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = t[i][n + m];
  return result;
}

// Membership of u in the cone generated by `generators` (nonnegative
// combinations), decided by LP feasibility.
template <class S>
bool in_positive_span(const std::vector<std::vector<S>>& generators, const std::vector<S>& u) {
  const std::size_t d = u.size();
  std::vector<std::vector<S>> A(d, std::vector<S>(generators.size(), S(0)));
  for (std::size_t g = 0; g < generators.size(); ++g)
    for (std::size_t i = 0; i < d; ++i) A[i][g] = generators[g][i];
  return solve_equality_feasibility<S>(std::move(A), u).feasible;
}

}  // namespace fracbil
