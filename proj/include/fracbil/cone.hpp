#pragma once

// Convex polyhedral cones with dual representations: generators (V-rep)
// and homogeneous inequalities <a, u> <= 0 (H-rep). Conversion in both
// directions is the same double-description pass, since the V-rep of
// {u : <a_i, u> <= 0} is exactly the generator set of pos{a_i}'s polar.
// Facet enumeration is restricted to dimension <= 4.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "linprog.hpp"
#include "sampling.hpp"
#include "vec.hpp"

namespace fracbil {

enum class SignRestriction { NonNegative, NonPositive, Free, Zero };

struct Cone {
  enum class Tag { OrthantProduct, FinitelyGenerated, PolarOf };

  int dim = 0;
  Tag tag = Tag::FinitelyGenerated;
  std::optional<std::vector<Vec>> generators;
  std::optional<std::vector<Vec>> inequalities;
  std::optional<std::vector<SignRestriction>> orthant;

  static Cone orthant_product(std::vector<SignRestriction> signs) {
    Cone c;
    c.dim = static_cast<int>(signs.size());
    c.tag = Tag::OrthantProduct;
    c.orthant = std::move(signs);
    std::vector<Vec> gens, rows;
    for (int i = 0; i < c.dim; ++i) {
      Vec e(c.dim, 0.0);
      e[i] = 1.0;
      Vec me(c.dim, 0.0);
      me[i] = -1.0;
      switch ((*c.orthant)[i]) {
        case SignRestriction::NonNegative:
          gens.push_back(e);
          rows.push_back(me);
          break;
        case SignRestriction::NonPositive:
          gens.push_back(me);
          rows.push_back(e);
          break;
        case SignRestriction::Free:
          gens.push_back(e);
          gens.push_back(me);
          break;
        case SignRestriction::Zero:
          rows.push_back(e);
          rows.push_back(me);
          break;
      }
    }
    c.generators = std::move(gens);
    c.inequalities = std::move(rows);
    return c;
  }

  static Cone from_generators(std::vector<Vec> gens, int dim) {
    Cone c;
    c.dim = dim;
    c.tag = Tag::FinitelyGenerated;
    c.generators = std::move(gens);
    return c;
  }

  static Cone from_inequalities(std::vector<Vec> rows, int dim) {
    Cone c;
    c.dim = dim;
    c.tag = Tag::FinitelyGenerated;
    c.inequalities = std::move(rows);
    return c;
  }

  static Cone full_space(int dim) {
    return orthant_product(std::vector<SignRestriction>(dim, SignRestriction::Free));
  }

  static Cone zero_cone(int dim) {
    return orthant_product(std::vector<SignRestriction>(dim, SignRestriction::Zero));
  }
};

namespace detail {

inline void prune_duplicate_rays(std::vector<Vec>& rays) {
  std::vector<Vec> kept;
  for (auto& r : rays) {
    double n = norm(r);
    if (n < 1e-12) continue;
    Vec u = (1.0 / n) * r;
    bool dup = false;
    for (const auto& k : kept)
      if (dot(k, u) > 1.0 - 1e-9) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(u);
  }
  rays = std::move(kept);
}

// Drop generators that already lie in the positive span of the others.
inline void prune_redundant_rays(std::vector<Vec>& rays) {
  for (std::size_t i = rays.size(); i-- > 0;) {
    if (rays.size() <= 1) break;
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (j != i) others.push_back(rays[j]);
    if (in_positive_span<double>(others, rays[i])) rays.erase(rays.begin() + i);
  }
}

}  // namespace detail

// V-representation of {u : <a, u> <= 0 for all rows a}. Starts from the
// spanning set {+-e_i} and clips one halfspace at a time, adding the
// boundary combinations of each positive/negative generator pair.
inline std::vector<Vec> double_description(const std::vector<Vec>& rows, int dim) {
  if (dim > 4) throw std::invalid_argument("double description limited to dimension <= 4");
  std::vector<Vec> gens;
  for (int i = 0; i < dim; ++i) {
    Vec e(dim, 0.0);
    e[i] = 1.0;
    gens.push_back(e);
    e[i] = -1.0;
    gens.push_back(e);
  }
  const double eps = 1e-12;
  for (const auto& a : rows) {
    std::vector<Vec> pos, neg, zero;
    for (const auto& g : gens) {
      double s = dot(a, g);
      if (s > eps)
        pos.push_back(g);
      else if (s < -eps)
        neg.push_back(g);
      else
        zero.push_back(g);
    }
    std::vector<Vec> next = zero;
    next.insert(next.end(), neg.begin(), neg.end());
    for (const auto& p : pos)
      for (const auto& n : neg) {
        double sp = dot(a, p);
        double sn = dot(a, n);
        Vec w = sp * n;
        Vec v = sn * p;
        for (int i = 0; i < dim; ++i) w[i] -= v[i];
        next.push_back(std::move(w));
      }
    detail::prune_duplicate_rays(next);
    gens = std::move(next);
    if (gens.empty()) break;
  }
  detail::prune_redundant_rays(gens);
  return gens;
}

inline const std::vector<Vec>& ensure_generators(Cone& c) {
  if (!c.generators) {
    if (!c.inequalities) throw std::invalid_argument("cone has no representation");
    c.generators = double_description(*c.inequalities, c.dim);
  }
  return *c.generators;
}

inline const std::vector<Vec>& ensure_inequalities(Cone& c) {
  if (!c.inequalities) {
    if (!c.generators) throw std::invalid_argument("cone has no representation");
    c.inequalities = double_description(*c.generators, c.dim);
  }
  return *c.inequalities;
}

inline bool cone_membership(const Cone& c, const Vec& u, double tol = 1e-9) {
  if (static_cast<int>(u.size()) != c.dim)
    throw std::invalid_argument("cone membership: dimension mismatch");
  if (c.orthant) {
    for (int i = 0; i < c.dim; ++i) {
      switch ((*c.orthant)[i]) {
        case SignRestriction::NonNegative:
          if (u[i] < -tol) return false;
          break;
        case SignRestriction::NonPositive:
          if (u[i] > tol) return false;
          break;
        case SignRestriction::Zero:
          if (std::fabs(u[i]) > tol) return false;
          break;
        case SignRestriction::Free:
          break;
      }
    }
    return true;
  }
  if (c.inequalities) {
    for (const auto& a : *c.inequalities)
      if (dot(a, u) > tol) return false;
    return true;
  }
  if (c.generators) {
    if (is_zero(u, tol)) return true;
    if (c.generators->empty()) return false;
    return in_positive_span<double>(*c.generators, u);
  }
  throw std::invalid_argument("cone has no representation");
}

// Polar cone. The polar's inequality rows are exactly the input generators;
// the polar's generators are the input inequality rows when those are known,
// and otherwise come from double description (dimension <= 4).
inline Cone polar(const Cone& c) {
  Cone tmp = c;
  std::vector<Vec> gens = ensure_generators(tmp);
  Cone out;
  out.dim = c.dim;
  out.tag = Cone::Tag::PolarOf;
  out.inequalities = gens;
  if (tmp.inequalities)
    out.generators = *tmp.inequalities;
  else if (c.dim <= 4)
    out.generators = double_description(gens, c.dim);
  return out;
}

inline Cone polar_of_points(const std::vector<Vec>& points, int dim) {
  Cone out;
  out.dim = dim;
  out.tag = Cone::Tag::PolarOf;
  out.inequalities = points;
  if (dim <= 4) out.generators = double_description(points, dim);
  return out;
}

inline Cone pos_hull(const std::vector<Vec>& points, int dim) {
  if (points.empty()) throw std::invalid_argument("pos_hull: empty set");
  Cone out = Cone::from_generators(points, dim);
  if (dim <= 4) out.inequalities = double_description(points, dim);
  return out;
}

// Normal cone to D at the origin: the polar of the tangent cone of D at 0.
// For an orthant product or a finitely generated (hence closed convex) cone
// the tangent cone at the origin is D itself.
inline Cone normal_cone_at_origin(const Cone& D) {
  if (!D.orthant && !D.generators && !D.inequalities)
    throw std::invalid_argument("normal cone: unsupported representation");
  return polar(D);
}

// Every generator must satisfy every inequality, and membership through the
// two representations must agree on sampled directions.
inline bool dual_representation_consistent(const Cone& c, int samples, std::uint64_t seed,
                                           double tol = 1e-9) {
  if (!c.generators || !c.inequalities) return true;
  for (const auto& g : *c.generators)
    for (const auto& a : *c.inequalities)
      if (dot(a, g) > tol * (1.0 + norm(a) * norm(g))) return false;

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec u(c.dim);
    for (auto& v : u) v = uniform_in(rng, -1.0, 1.0);
    bool h = true;
    for (const auto& a : *c.inequalities)
      if (dot(a, u) > tol) {
        h = false;
        break;
      }
    bool v = is_zero(u, tol) ||
             (!c.generators->empty() && in_positive_span<double>(*c.generators, u));
    if (h != v) {
      // Disagreement is tolerated only in a thin band around a facet.
      bool near_boundary = false;
      for (const auto& a : *c.inequalities)
        if (std::fabs(dot(a, u)) <= 1e-7) near_boundary = true;
      if (!near_boundary) return false;
    }
  }
  return true;
}

}  // namespace fracbil
