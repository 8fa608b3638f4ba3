#pragma once

// Expression trees for scalar functions of the joint variable vector.
// Two evaluators live side by side: a double evaluator used by every grid
// scan, and an exact rational evaluator used wherever certificates demand
// exactness. The exact evaluator refuses irrational operations (roots,
// fractional powers) instead of approximating them.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "vec.hpp"

namespace fracbil {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an exact evaluation would need an irrational value.
struct NotExactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Sqrt, Cbrt, Min, Max };

  Op op = Op::Const;
  Rational constant{0};
  double constant_d = 0.0;
  int var = -1;           // flat index into the point vector
  std::string var_label;  // source spelling, e.g. "x" or "y[1]"
  long exp_num = 0;       // Pow exponent, reduced, exp_den >= 1
  long exp_den = 1;
  std::vector<ExprPtr> args;

  static ExprPtr make_const(Rational v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Const;
    e->constant = std::move(v);
    e->constant_d = to_double(e->constant);
    return e;
  }
  static ExprPtr make_var(int index, std::string label) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Var;
    e->var = index;
    e->var_label = std::move(label);
    return e;
  }
  static ExprPtr make_unary(Op op, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = {std::move(a)};
    return e;
  }
  static ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = {std::move(a), std::move(b)};
    return e;
  }
  static ExprPtr make_nary(Op op, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = std::move(args);
    return e;
  }
  static ExprPtr make_pow(ExprPtr base, const Rational& exponent) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Pow;
    e->args = {std::move(base)};
    e->exp_num = static_cast<long>(mpz_get_si(exponent.get_num().get_mpz_t()));
    e->exp_den = static_cast<long>(mpz_get_si(exponent.get_den().get_mpz_t()));
    return e;
  }
};

inline double eval(const Expr& e, const Vec& point) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const:
      return e.constant_d;
    case Op::Var:
      if (e.var < 0 || e.var >= static_cast<int>(point.size()))
        throw EvalError("variable index out of range: " + e.var_label);
      return point[e.var];
    case Op::Neg:
      return -eval(*e.args[0], point);
    case Op::Add:
      return eval(*e.args[0], point) + eval(*e.args[1], point);
    case Op::Sub:
      return eval(*e.args[0], point) - eval(*e.args[1], point);
    case Op::Mul:
      return eval(*e.args[0], point) * eval(*e.args[1], point);
    case Op::Div: {
      double d = eval(*e.args[1], point);
      if (d == 0) throw EvalError("division by zero");
      return eval(*e.args[0], point) / d;
    }
    case Op::Pow: {
      double b = eval(*e.args[0], point);
      if (e.exp_den == 1) return std::pow(b, static_cast<double>(e.exp_num));
      double x = static_cast<double>(e.exp_num) / static_cast<double>(e.exp_den);
      if (e.exp_den % 2 == 1) {
        // Odd root: sign-aware, total on the reals.
        double mag = std::pow(std::fabs(b), x);
        bool neg = b < 0 && (e.exp_num % 2 != 0);
        return neg ? -mag : mag;
      }
      if (b < 0) throw EvalError("even root of a negative value");
      return std::pow(b, x);
    }
    case Op::Abs:
      return std::fabs(eval(*e.args[0], point));
    case Op::Sqrt: {
      double b = eval(*e.args[0], point);
      if (b < 0) throw EvalError("sqrt of a negative value");
      return std::sqrt(b);
    }
    case Op::Cbrt:
      return std::cbrt(eval(*e.args[0], point));
    case Op::Min: {
      double m = eval(*e.args[0], point);
      for (std::size_t i = 1; i < e.args.size(); ++i) m = std::min(m, eval(*e.args[i], point));
      return m;
    }
    case Op::Max: {
      double m = eval(*e.args[0], point);
      for (std::size_t i = 1; i < e.args.size(); ++i) m = std::max(m, eval(*e.args[i], point));
      return m;
    }
  }
  throw EvalError("corrupt expression node");
}

inline Rational pow_exact(const Rational& base, long n) {
  if (n == 0) return Rational(1);
  long m = n < 0 ? -n : n;
  Rational r(1);
  for (long i = 0; i < m; ++i) r *= base;
  if (n < 0) {
    if (r == 0) throw EvalError("zero raised to a negative power");
    r = 1 / r;
  }
  return r;
}

inline Rational eval_exact(const Expr& e, const QVec& point) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const:
      return e.constant;
    case Op::Var:
      if (e.var < 0 || e.var >= static_cast<int>(point.size()))
        throw EvalError("variable index out of range: " + e.var_label);
      return point[e.var];
    case Op::Neg:
      return -eval_exact(*e.args[0], point);
    case Op::Add:
      return eval_exact(*e.args[0], point) + eval_exact(*e.args[1], point);
    case Op::Sub:
      return eval_exact(*e.args[0], point) - eval_exact(*e.args[1], point);
    case Op::Mul:
      return eval_exact(*e.args[0], point) * eval_exact(*e.args[1], point);
    case Op::Div: {
      Rational d = eval_exact(*e.args[1], point);
      if (d == 0) throw EvalError("division by zero");
      return eval_exact(*e.args[0], point) / d;
    }
    case Op::Pow: {
      if (e.exp_den != 1) throw NotExactError("fractional power is not exactly evaluable");
      return pow_exact(eval_exact(*e.args[0], point), e.exp_num);
    }
    case Op::Abs:
      return abs(eval_exact(*e.args[0], point));
    case Op::Sqrt:
      throw NotExactError("sqrt is not exactly evaluable");
    case Op::Cbrt:
      throw NotExactError("cbrt is not exactly evaluable");
    case Op::Min: {
      Rational m = eval_exact(*e.args[0], point);
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        Rational v = eval_exact(*e.args[i], point);
        if (v < m) m = v;
      }
      return m;
    }
    case Op::Max: {
      Rational m = eval_exact(*e.args[0], point);
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        Rational v = eval_exact(*e.args[i], point);
        if (v > m) m = v;
      }
      return m;
    }
  }
  throw EvalError("corrupt expression node");
}

inline int max_var_index(const Expr& e) {
  int m = e.var;
  for (const auto& a : e.args) m = std::max(m, max_var_index(*a));
  return m;
}

// Polynomial degree with constants folded structurally: 0 for constant
// subtrees, 1 for affine, nullopt otherwise. Used to validate region guards.
inline std::optional<int> poly_degree(const Expr& e) {
  using Op = Expr::Op;
  auto nonlinear_if_var = [&]() -> std::optional<int> {
    for (const auto& a : e.args) {
      auto d = poly_degree(*a);
      if (!d || *d != 0) return std::nullopt;
    }
    return 0;
  };
  switch (e.op) {
    case Op::Const:
      return 0;
    case Op::Var:
      return 1;
    case Op::Neg:
      return poly_degree(*e.args[0]);
    case Op::Add:
    case Op::Sub: {
      auto a = poly_degree(*e.args[0]);
      auto b = poly_degree(*e.args[1]);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case Op::Mul: {
      auto a = poly_degree(*e.args[0]);
      auto b = poly_degree(*e.args[1]);
      if (!a || !b) return std::nullopt;
      int d = *a + *b;
      return d <= 1 ? std::optional<int>(d) : std::nullopt;
    }
    case Op::Div: {
      auto a = poly_degree(*e.args[0]);
      auto b = poly_degree(*e.args[1]);
      if (!a || !b || *b != 0) return std::nullopt;
      return *a;
    }
    case Op::Pow:
    case Op::Abs:
    case Op::Sqrt:
    case Op::Cbrt:
    case Op::Min:
    case Op::Max:
      return nonlinear_if_var();
  }
  return std::nullopt;
}

namespace detail {

inline int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

inline std::string format_constant(const Rational& r) {
  if (r.get_den() == 1 && r >= 0) return r.get_num().get_str();
  // Wrapped so the reparse (unary minus / division) binds correctly.
  return "(" + format_rational(r) + ")";
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  using Op = Expr::Op;
  auto child = [&](int i, int min_prec) {
    std::string s = to_string(*e.args[i]);
    if (detail::precedence(e.args[i]->op) < min_prec) return "(" + s + ")";
    return s;
  };
  int p = detail::precedence(e.op);
  switch (e.op) {
    case Op::Const:
      return detail::format_constant(e.constant);
    case Op::Var:
      return e.var_label;
    case Op::Neg:
      return "-" + child(0, p);
    case Op::Add:
      return child(0, p) + " + " + child(1, p);
    case Op::Sub:
      return child(0, p) + " - " + child(1, p + 1);
    case Op::Mul:
      return child(0, p) + "*" + child(1, p);
    case Op::Div:
      return child(0, p) + "/" + child(1, p + 1);
    case Op::Pow: {
      std::string ex = e.exp_den == 1 ? (e.exp_num < 0 ? "(" + std::to_string(e.exp_num) + ")"
                                                       : std::to_string(e.exp_num))
                                      : "(" + std::to_string(e.exp_num) + "/" +
                                            std::to_string(e.exp_den) + ")";
      return child(0, p + 1) + "^" + ex;
    }
    case Op::Abs:
      return "abs(" + to_string(*e.args[0]) + ")";
    case Op::Sqrt:
      return "sqrt(" + to_string(*e.args[0]) + ")";
    case Op::Cbrt:
      return "cbrt(" + to_string(*e.args[0]) + ")";
    case Op::Min:
    case Op::Max: {
      std::string s = e.op == Op::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(*e.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace fracbil
