#pragma once

// Region-guarded piecewise functions. Branch guards are conjunctions of
// affine comparisons; the first matching branch wins.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"

namespace fracbil {

enum class Cmp { LE, LT, GE, GT, EQ };

inline std::string to_string(Cmp c) {
  switch (c) {
    case Cmp::LE: return "<=";
    case Cmp::LT: return "<";
    case Cmp::GE: return ">=";
    case Cmp::GT: return ">";
    case Cmp::EQ: return "==";
  }
  return "?";
}

struct Condition {
  ExprPtr lhs;
  Cmp cmp = Cmp::LE;
  ExprPtr rhs;

  bool holds(const Vec& point) const {
    double a = eval(*lhs, point);
    double b = eval(*rhs, point);
    switch (cmp) {
      case Cmp::LE: return a <= b;
      case Cmp::LT: return a < b;
      case Cmp::GE: return a >= b;
      case Cmp::GT: return a > b;
      case Cmp::EQ: return a == b;
    }
    return false;
  }

  bool holds_exact(const QVec& point) const {
    Rational a = eval_exact(*lhs, point);
    Rational b = eval_exact(*rhs, point);
    switch (cmp) {
      case Cmp::LE: return a <= b;
      case Cmp::LT: return a < b;
      case Cmp::GE: return a >= b;
      case Cmp::GT: return a > b;
      case Cmp::EQ: return a == b;
    }
    return false;
  }
};

// Empty condition list means the guard `true`.
struct Region {
  std::vector<Condition> conditions;

  bool matches(const Vec& point) const {
    for (const auto& c : conditions)
      if (!c.holds(point)) return false;
    return true;
  }
  bool matches_exact(const QVec& point) const {
    for (const auto& c : conditions)
      if (!c.holds_exact(point)) return false;
    return true;
  }
};

struct PiecewiseFn {
  std::string name;
  int dim = 0;
  std::vector<std::pair<Region, ExprPtr>> branches;

  int branch_at(const Vec& point) const {
    for (std::size_t i = 0; i < branches.size(); ++i)
      if (branches[i].first.matches(point)) return static_cast<int>(i);
    return -1;
  }

  double eval_at(const Vec& point) const {
    int b = branch_at(point);
    if (b < 0) throw EvalError(name + ": no region matches " + format_vec(point));
    double v = eval(*branches[b].second, point);
    if (!std::isfinite(v)) throw EvalError(name + ": non-finite value at " + format_vec(point));
    return v;
  }

  Rational eval_exact_at(const QVec& point) const {
    for (const auto& [region, expr] : branches)
      if (region.matches_exact(point)) return eval_exact(*expr, point);
    throw EvalError(name + ": no region matches " + format_vec(point));
  }
};

namespace detail {

inline ExprPtr scale_expr(const Rational& c, const ExprPtr& e) {
  if (c == 1) return e;
  if (c == -1) return Expr::make_unary(Expr::Op::Neg, e);
  return Expr::make_binary(Expr::Op::Mul, Expr::make_const(c), e);
}

inline ExprPtr scaled_sum_expr(const Rational& ca, const ExprPtr& ea, const Rational& cb,
                               const ExprPtr& eb) {
  if (ca == 0) return scale_expr(cb, eb);
  if (cb == 0) return scale_expr(ca, ea);
  if (cb < 0) {
    Rational mcb = -cb;
    return Expr::make_binary(Expr::Op::Sub, scale_expr(ca, ea), scale_expr(mcb, eb));
  }
  return Expr::make_binary(Expr::Op::Add, scale_expr(ca, ea), scale_expr(cb, eb));
}

}  // namespace detail

// ca*a + cb*b as a piecewise function. Branch regions are pairwise
// conjunctions in lexicographic order, which preserves first-match
// semantics of both operands.
inline PiecewiseFn linear_combination(const std::string& name, const PiecewiseFn& a,
                                      const Rational& ca, const PiecewiseFn& b,
                                      const Rational& cb) {
  PiecewiseFn out;
  out.name = name;
  out.dim = a.dim;
  for (const auto& [ra, ea] : a.branches) {
    for (const auto& [rb, eb] : b.branches) {
      Region r = ra;
      r.conditions.insert(r.conditions.end(), rb.conditions.begin(), rb.conditions.end());
      out.branches.emplace_back(std::move(r), detail::scaled_sum_expr(ca, ea, cb, eb));
    }
  }
  return out;
}

}  // namespace fracbil
