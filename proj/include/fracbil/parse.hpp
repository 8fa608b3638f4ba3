#pragma once

// Problem-file parser: UTF-8 text, one declaration per line, `#` comments.
// Expressions are infix with ^ (constant rational exponents), abs, sqrt,
// cbrt, min, max. Region guards are affine comparisons joined by &&.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "problem.hpp"

namespace fracbil {

struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                           ": " + msg),
        line(line_),
        col(col_) {}
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0, col = 0;
};

inline std::vector<std::vector<Token>> tokenize(const std::string& source) {
  std::vector<std::vector<Token>> lines;
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<Token> toks;
    std::size_t i = 0;
    const std::size_t n = raw.size();
    auto push = [&](Token::Kind k, std::string text, int col) {
      toks.push_back({k, std::move(text), line_no, col});
    };
    while (i < n) {
      char c = raw[i];
      int col = static_cast<int>(i) + 1;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '#') break;  // comment to end of line
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < n && (std::isalnum(static_cast<unsigned char>(raw[j])) || raw[j] == '_')) ++j;
        push(Token::Kind::Ident, raw.substr(i, j - i), col);
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
        if (j < n && raw[j] == '.' && j + 1 < n &&
            std::isdigit(static_cast<unsigned char>(raw[j + 1]))) {
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
        }
        push(Token::Kind::Number, raw.substr(i, j - i), col);
        i = j;
        continue;
      }
      if (c == '"') {
        std::size_t j = raw.find('"', i + 1);
        if (j == std::string::npos) throw ParseError("unterminated string", line_no, col);
        push(Token::Kind::String, raw.substr(i + 1, j - i - 1), col);
        i = j + 1;
        continue;
      }
      if (i + 1 < n) {
        std::string two = raw.substr(i, 2);
        if (two == "<=" || two == ">=" || two == "==" || two == "&&") {
          push(Token::Kind::Punct, two, col);
          i += 2;
          continue;
        }
      }
      static const std::string singles = "()[]{},;:=<>+-*/^";
      if (singles.find(c) != std::string::npos) {
        push(Token::Kind::Punct, std::string(1, c), col);
        ++i;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

// Cursor over one declaration line.
class TokenCursor {
 public:
  explicit TokenCursor(const std::vector<Token>& toks) : toks_(toks) {}

  const Token& peek() const {
    if (pos_ >= toks_.size()) {
      end_.kind = Token::Kind::End;
      end_.line = toks_.empty() ? 0 : toks_.back().line;
      end_.col = toks_.empty() ? 0 : toks_.back().col + static_cast<int>(toks_.back().text.size());
      return end_;
    }
    return toks_[pos_];
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  bool at_end() const { return pos_ >= toks_.size(); }

  bool accept_punct(const std::string& p) {
    if (peek().kind == Token::Kind::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  std::string expect_ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier");
    return next().text;
  }
  void expect_keyword(const std::string& kw) {
    if (peek().kind != Token::Kind::Ident || peek().text != kw) fail("expected '" + kw + "'");
    ++pos_;
  }
  bool accept_keyword(const std::string& kw) {
    if (peek().kind == Token::Kind::Ident && peek().text == kw) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of line" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }

  long expect_integer() {
    Rational r = expect_number();
    if (r.get_den() != 1) fail("expected an integer");
    return static_cast<long>(r.get_num().get_si());
  }

  // Signed rational literal: [-+] digits [. digits | / digits].
  Rational expect_number() {
    bool neg = false;
    while (peek().kind == Token::Kind::Punct && (peek().text == "-" || peek().text == "+"))
      neg ^= next().text == "-";
    if (peek().kind != Token::Kind::Number) fail("expected a number");
    std::string text = next().text;
    if (accept_punct("/")) {
      if (peek().kind != Token::Kind::Number) fail("expected a denominator");
      text += "/" + next().text;
    }
    auto r = parse_rational(text);
    if (!r) fail("malformed number '" + text + "'");
    return neg ? Rational(-*r) : *r;
  }

  QVec expect_point_tuple() {
    expect_punct("(");
    QVec p;
    p.push_back(expect_number());
    while (accept_punct(",")) p.push_back(expect_number());
    expect_punct(")");
    return p;
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  mutable Token end_;
};

// Recursive-descent expression parser. Variable names resolve against the
// declared dimensions; z aliases the y block (the lower-level copy).
class ExpressionParser {
 public:
  ExpressionParser(TokenCursor& cur, int nx, int ny) : cur_(cur), nx_(nx), ny_(ny) {}

  ExprPtr parse() { return parse_sum(); }

 private:
  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    while (true) {
      if (cur_.accept_punct("+"))
        e = Expr::make_binary(Expr::Op::Add, e, parse_product());
      else if (cur_.accept_punct("-"))
        e = Expr::make_binary(Expr::Op::Sub, e, parse_product());
      else
        return e;
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    while (true) {
      if (cur_.accept_punct("*"))
        e = Expr::make_binary(Expr::Op::Mul, e, parse_unary());
      else if (cur_.accept_punct("/"))
        e = Expr::make_binary(Expr::Op::Div, e, parse_unary());
      else
        return e;
    }
  }

  ExprPtr parse_unary() {
    if (cur_.accept_punct("-")) return Expr::make_unary(Expr::Op::Neg, parse_unary());
    if (cur_.accept_punct("+")) return parse_unary();
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (!cur_.accept_punct("^")) return base;
    Token at = cur_.peek();
    ExprPtr exp = parse_unary();
    if (max_var_index(*exp) >= 0)
      throw ParseError("exponent must be a constant rational", at.line, at.col);
    Rational r;
    try {
      r = eval_exact(*exp, {});
    } catch (const std::exception&) {
      throw ParseError("exponent must be a constant rational", at.line, at.col);
    }
    return Expr::make_pow(base, r);
  }

  ExprPtr parse_atom() {
    const Token& t = cur_.peek();
    if (t.kind == Token::Kind::Number) {
      cur_.next();
      auto r = parse_rational(t.text);
      if (!r) throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
      return Expr::make_const(*r);
    }
    if (cur_.accept_punct("(")) {
      ExprPtr e = parse_sum();
      cur_.expect_punct(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      cur_.next();
      const std::string& name = t.text;
      if (name == "abs" || name == "sqrt" || name == "cbrt") {
        cur_.expect_punct("(");
        ExprPtr a = parse_sum();
        cur_.expect_punct(")");
        Expr::Op op = name == "abs" ? Expr::Op::Abs
                      : name == "sqrt" ? Expr::Op::Sqrt
                                       : Expr::Op::Cbrt;
        return Expr::make_unary(op, a);
      }
      if (name == "min" || name == "max") {
        cur_.expect_punct("(");
        std::vector<ExprPtr> args;
        args.push_back(parse_sum());
        while (cur_.accept_punct(",")) args.push_back(parse_sum());
        cur_.expect_punct(")");
        if (args.size() < 2) throw ParseError(name + " needs at least two arguments", t.line, t.col);
        return Expr::make_nary(name == "min" ? Expr::Op::Min : Expr::Op::Max, std::move(args));
      }
      if (name == "x" || name == "y" || name == "z") {
        int block = name == "x" ? nx_ : ny_;
        int base = name == "x" ? 0 : nx_;
        int idx = 0;
        std::string label = name;
        if (cur_.accept_punct("[")) {
          Rational r = cur_.expect_number();
          if (r.get_den() != 1 || r < 0)
            throw ParseError("coordinate index must be a nonnegative integer", t.line, t.col);
          idx = static_cast<int>(r.get_num().get_si());
          cur_.expect_punct("]");
          label += "[" + std::to_string(idx) + "]";
        } else if (block != 1) {
          throw ParseError("dimension mismatch: '" + name + "' needs an index, block has " +
                               std::to_string(block) + " coordinates",
                           t.line, t.col);
        }
        if (idx >= block)
          throw ParseError("dimension mismatch: index " + std::to_string(idx) +
                               " out of range for '" + name + "'",
                           t.line, t.col);
        return Expr::make_var(base + idx, label);
      }
      throw ParseError("unknown identifier '" + name + "'", t.line, t.col);
    }
    cur_.fail("expected an expression");
  }

  TokenCursor& cur_;
  int nx_, ny_;
};

inline Cmp parse_cmp(TokenCursor& cur) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Punct) cur.fail("expected a comparison operator");
  if (cur.accept_punct("<=")) return Cmp::LE;
  if (cur.accept_punct(">=")) return Cmp::GE;
  if (cur.accept_punct("==")) return Cmp::EQ;
  if (cur.accept_punct("<")) return Cmp::LT;
  if (cur.accept_punct(">")) return Cmp::GT;
  cur.fail("expected a comparison operator");
}

inline Region parse_region(TokenCursor& cur, int nx, int ny) {
  Region region;
  if (cur.accept_keyword("true")) return region;
  while (true) {
    Token at = cur.peek();
    ExpressionParser p(cur, nx, ny);
    Condition c;
    c.lhs = p.parse();
    c.cmp = parse_cmp(cur);
    ExpressionParser q(cur, nx, ny);
    c.rhs = q.parse();
    auto dl = poly_degree(*c.lhs);
    auto dr = poly_degree(*c.rhs);
    if (!dl || !dr || *dl > 1 || *dr > 1)
      throw ParseError("region guard is not affine", at.line, at.col);
    region.conditions.push_back(std::move(c));
    if (!cur.accept_punct("&&")) return region;
  }
}

inline PiecewiseFn parse_piecewise(TokenCursor& cur, const std::string& name, int nx, int ny) {
  Token at = cur.peek();
  cur.expect_keyword("piecewise");
  cur.expect_punct("{");
  PiecewiseFn fn;
  fn.name = name;
  fn.dim = nx + ny;
  while (true) {
    if (cur.accept_punct("}")) break;
    Region r = parse_region(cur, nx, ny);
    cur.expect_punct(":");
    ExpressionParser p(cur, nx, ny);
    ExprPtr e = p.parse();
    fn.branches.emplace_back(std::move(r), std::move(e));
    if (cur.accept_punct(";")) continue;
    cur.expect_punct("}");
    break;
  }
  if (fn.branches.empty()) throw ParseError(name + ": empty region cover", at.line, at.col);
  return fn;
}

// "F1" / "negG2" / "H3" / "phi1" / "Psi" / "varphi2"
inline std::optional<TargetRef> parse_target_name(const std::string& s) {
  auto split = [&](const std::string& prefix, TargetRef::Family fam) -> std::optional<TargetRef> {
    if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    std::string digits = s.substr(prefix.size());
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return TargetRef{fam, std::stoi(digits)};
  };
  if (s == "Psi") return TargetRef{TargetRef::Family::Psi, 0};
  if (auto t = split("varphi", TargetRef::Family::Varphi)) return t;
  if (auto t = split("negG", TargetRef::Family::NegG)) return t;
  if (auto t = split("phi", TargetRef::Family::Phi)) return t;
  if (auto t = split("F", TargetRef::Family::F)) return t;
  if (auto t = split("H", TargetRef::Family::H)) return t;
  return std::nullopt;
}

}  // namespace detail

inline ExprPtr parse_expression(const std::string& text, int nx, int ny) {
  auto lines = detail::tokenize(text);
  if (lines.size() != 1) throw ParseError("expected a single expression", 1, 1);
  detail::TokenCursor cur(lines[0]);
  detail::ExpressionParser p(cur, nx, ny);
  ExprPtr e = p.parse();
  if (!cur.at_end()) cur.fail("trailing input after expression");
  return e;
}

inline BilevelProblem parse_problem(const std::string& source) {
  using detail::Token;
  using detail::TokenCursor;

  BilevelProblem prob;
  bool have_dims = false, have_name = false, have_f = false;
  std::map<int, AxisSpec> x_axes, y_axes, z_axes;
  std::map<int, PiecewiseFn> F, G, H, phi;
  int refpoint_line = 0;

  auto lines = detail::tokenize(source);
  for (const auto& toks : lines) {
    TokenCursor cur(toks);
    const Token& head = cur.peek();
    if (head.kind != Token::Kind::Ident) cur.fail("expected a declaration");

    auto require_dims = [&]() {
      if (!have_dims) throw ParseError("dims must be declared first", head.line, head.col);
    };

    if (cur.accept_keyword("problem")) {
      if (cur.peek().kind != Token::Kind::String) cur.fail("expected a quoted problem name");
      prob.name = cur.next().text;
      have_name = true;
    } else if (cur.accept_keyword("dims")) {
      cur.expect_keyword("x");
      cur.expect_punct("=");
      prob.nx = static_cast<int>(cur.expect_integer());
      cur.expect_keyword("y");
      cur.expect_punct("=");
      prob.ny = static_cast<int>(cur.expect_integer());
      cur.expect_keyword("objectives");
      cur.expect_punct("=");
      prob.num_objectives = static_cast<int>(cur.expect_integer());
      if (prob.nx < 1 || prob.ny < 1 || prob.num_objectives < 1)
        throw ParseError("dims must satisfy x >= 1, y >= 1, objectives >= 1", head.line, head.col);
      have_dims = true;
    } else if (cur.accept_keyword("box") || (head.text == "theta" && cur.accept_keyword("theta"))) {
      require_dims();
      bool is_theta = head.text == "theta";
      std::string block = cur.expect_ident();
      int idx = 0;
      if (cur.accept_punct("[")) {
        idx = static_cast<int>(cur.expect_integer());
        cur.expect_punct("]");
      }
      cur.expect_keyword("in");
      cur.expect_punct("[");
      Rational lo = cur.expect_number();
      cur.expect_punct(",");
      Rational hi = cur.expect_number();
      cur.expect_punct("]");
      cur.expect_keyword("step");
      Rational step = cur.expect_number();
      AxisSpec axis(lo, hi, step);
      if (is_theta) {
        if (block != "z") cur.fail("theta declares z coordinates");
        if (idx < 0 || idx >= prob.ny)
          throw ParseError("dimension mismatch: theta index out of range", head.line, head.col);
        z_axes[idx] = axis;
      } else if (block == "x") {
        if (idx < 0 || idx >= prob.nx)
          throw ParseError("dimension mismatch: x index out of range", head.line, head.col);
        x_axes[idx] = axis;
      } else if (block == "y") {
        if (idx < 0 || idx >= prob.ny)
          throw ParseError("dimension mismatch: y index out of range", head.line, head.col);
        y_axes[idx] = axis;
      } else {
        cur.fail("box declares x or y coordinates");
      }
    } else if (cur.accept_keyword("refpoint")) {
      require_dims();
      cur.expect_punct("=");
      prob.refpoint = cur.expect_point_tuple();
      refpoint_line = head.line;
      if (static_cast<int>(prob.refpoint->size()) != prob.dim())
        throw ParseError("dimension mismatch: refpoint needs " + std::to_string(prob.dim()) +
                             " coordinates",
                         head.line, head.col);
    } else if (cur.accept_keyword("D")) {
      require_dims();
      cur.expect_punct("=");
      cur.expect_keyword("orthant");
      cur.expect_punct("(");
      std::vector<SignRestriction> signs;
      while (true) {
        if (cur.accept_punct("+"))
          signs.push_back(SignRestriction::NonNegative);
        else if (cur.accept_punct("-"))
          signs.push_back(SignRestriction::NonPositive);
        else if (cur.accept_punct("*"))
          signs.push_back(SignRestriction::Free);
        else
          cur.fail("expected one of + - *");
        if (!cur.accept_punct(",")) break;
      }
      cur.expect_punct(")");
      if (static_cast<int>(signs.size()) != prob.dim())
        throw ParseError("dimension mismatch: D needs " + std::to_string(prob.dim()) + " signs",
                         head.line, head.col);
      prob.continuity_cone = Cone::orthant_product(std::move(signs));
    } else if (cur.accept_keyword("convexificator")) {
      require_dims();
      ConvexificatorDecl decl;
      std::string target = cur.expect_ident();
      auto tref = detail::parse_target_name(target);
      if (!tref) throw ParseError("unknown convexificator target '" + target + "'", head.line, head.col);
      decl.target = *tref;
      std::string kind = cur.expect_ident();
      if (kind == "upper")
        decl.kind = ConvexificatorKind::Upper;
      else if (kind == "semiregular")
        decl.kind = ConvexificatorKind::SemiRegular;
      else
        cur.fail("expected 'upper' or 'semiregular'");
      if (cur.accept_keyword("at")) decl.anchor = cur.expect_point_tuple();
      cur.expect_punct("=");
      cur.expect_punct("{");
      while (true) {
        decl.points.push_back(cur.expect_point_tuple());
        if (!cur.accept_punct(",")) break;
      }
      cur.expect_punct("}");
      for (const auto& p : decl.points)
        if (static_cast<int>(p.size()) != prob.dim())
          throw ParseError("dimension mismatch: carrier points need " +
                               std::to_string(prob.dim()) + " coordinates",
                           head.line, head.col);
      if (decl.anchor && static_cast<int>(decl.anchor->size()) != prob.dim())
        throw ParseError("dimension mismatch: anchor point", head.line, head.col);
      prob.convexificators.push_back(std::move(decl));
    } else if (cur.accept_keyword("assert")) {
      std::string which = cur.expect_ident();
      cur.expect_punct("=");
      bool value;
      if (cur.accept_keyword("true"))
        value = true;
      else if (cur.accept_keyword("false"))
        value = false;
      else
        cur.fail("expected true or false");
      if (which == "pos_xi_closed")
        prob.assert_pos_xi_closed = value;
      else if (which == "star_shaped")
        prob.assert_star_shaped = value;
      else
        throw ParseError("unknown assertion '" + which + "'", head.line, head.col);
    } else {
      // Function definition: F<k>, G<k>, H<j>, phi<s>, or f.
      require_dims();
      std::string name = cur.expect_ident();
      cur.expect_punct("=");
      PiecewiseFn fn = detail::parse_piecewise(cur, name, prob.nx, prob.ny);
      auto indexed = [&](const std::string& prefix) -> std::optional<int> {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
          return std::nullopt;
        std::string digits = name.substr(prefix.size());
        for (char c : digits)
          if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        return std::stoi(digits);
      };
      if (name == "f") {
        prob.lower_objective = std::move(fn);
        have_f = true;
      } else if (auto k = indexed("F")) {
        if (*k < 1 || *k > prob.num_objectives)
          throw ParseError("unknown identifier '" + name + "': objective index out of range",
                           head.line, head.col);
        F[*k] = std::move(fn);
      } else if (auto k = indexed("G")) {
        if (*k < 1 || *k > prob.num_objectives)
          throw ParseError("unknown identifier '" + name + "': objective index out of range",
                           head.line, head.col);
        G[*k] = std::move(fn);
      } else if (auto j = indexed("H")) {
        if (*j < 1) throw ParseError("unknown identifier '" + name + "'", head.line, head.col);
        H[*j] = std::move(fn);
      } else if (auto s = indexed("phi")) {
        if (*s < 1) throw ParseError("unknown identifier '" + name + "'", head.line, head.col);
        phi[*s] = std::move(fn);
      } else {
        throw ParseError("unknown identifier '" + name + "'", head.line, head.col);
      }
    }
    if (!cur.at_end()) cur.fail("trailing input after declaration");
  }

  if (!have_name) throw ParseError("missing 'problem \"<name>\"' declaration", 1, 1);
  if (!have_dims) throw ParseError("missing 'dims' declaration", 1, 1);
  if (!have_f) throw ParseError("missing lower-level objective f", 1, 1);

  auto collect = [&](std::map<int, PiecewiseFn>& src, const std::string& what,
                     int expect_exact) -> std::vector<PiecewiseFn> {
    std::vector<PiecewiseFn> out;
    int count = expect_exact >= 0 ? expect_exact
                                  : (src.empty() ? 0 : src.rbegin()->first);
    for (int i = 1; i <= count; ++i) {
      auto it = src.find(i);
      if (it == src.end())
        throw ParseError("dimension mismatch: missing " + what + std::to_string(i), 1, 1);
      out.push_back(std::move(it->second));
    }
    if (static_cast<int>(src.size()) != count)
      throw ParseError("dimension mismatch: unexpected extra " + what + " declarations", 1, 1);
    return out;
  };
  prob.upper_numerators = collect(F, "F", prob.num_objectives);
  prob.upper_denominators = collect(G, "G", prob.num_objectives);
  prob.upper_constraints = collect(H, "H", -1);
  prob.lower_constraints = collect(phi, "phi", -1);

  auto collect_axes = [&](std::map<int, AxisSpec>& axes, int n, const std::string& what,
                          bool optional) -> std::optional<Box> {
    if (optional && axes.empty()) return std::nullopt;
    Box box;
    for (int i = 0; i < n; ++i) {
      auto it = axes.find(i);
      if (it == axes.end())
        throw ParseError("dimension mismatch: missing box for " + what + "[" + std::to_string(i) +
                             "]",
                         1, 1);
      box.axes.push_back(it->second);
    }
    box.validate(what + " box");
    return box;
  };
  prob.x_box = *collect_axes(x_axes, prob.nx, "x", false);
  prob.y_box = *collect_axes(y_axes, prob.ny, "y", false);
  prob.theta_box = collect_axes(z_axes, prob.ny, "z", true);

  // Convexificator target indices must reference declared functions.
  for (const auto& d : prob.convexificators) {
    int k = d.target.index;
    bool ok = true;
    switch (d.target.family) {
      case TargetRef::Family::F:
      case TargetRef::Family::NegG:
      case TargetRef::Family::Varphi:
        ok = k >= 1 && k <= prob.num_objectives;
        break;
      case TargetRef::Family::H:
        ok = k >= 1 && k <= prob.num_upper_constraints();
        break;
      case TargetRef::Family::Phi:
        ok = k >= 1 && k <= prob.num_lower_constraints();
        break;
      case TargetRef::Family::Psi:
        break;
    }
    if (!ok)
      throw ParseError("unknown convexificator target '" + d.target.label() + "'", 1, 1);
  }

  // Positivity of the fractional data at the reference point.
  if (prob.refpoint) {
    for (int k = 0; k < prob.num_objectives; ++k) {
      Rational gval, fval;
      try {
        gval = prob.upper_denominators[k].eval_exact_at(*prob.refpoint);
        fval = prob.upper_numerators[k].eval_exact_at(*prob.refpoint);
      } catch (const NotExactError&) {
        Vec p = to_vec(*prob.refpoint);
        gval = Rational(prob.upper_denominators[k].eval_at(p));
        fval = Rational(prob.upper_numerators[k].eval_at(p));
      }
      if (gval <= 0)
        throw ParseError("G" + std::to_string(k + 1) + " must be positive at the reference point",
                         refpoint_line, 1);
      if (fval < 0)
        throw ParseError("F" + std::to_string(k + 1) +
                             " must be nonnegative at the reference point",
                         refpoint_line, 1);
    }
  }

  return prob;
}

inline BilevelProblem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace fracbil
