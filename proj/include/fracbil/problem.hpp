#pragma once

// The full problem instance: fractional objectives F_k/G_k, upper
// constraints H_j, the lower-level objective and constraints, domain boxes,
// the compact z-box for the reformulation, and the declared analytic data
// (reference point, continuity cone, convexificator carriers, assertion
// flags).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cone.hpp"
#include "grid.hpp"
#include "piecewise.hpp"

namespace fracbil {

struct TargetRef {
  enum class Family { F, NegG, H, Phi, Psi, Varphi };
  Family family = Family::F;
  int index = 0;  // 1-based for indexed families

  std::string label() const {
    switch (family) {
      case Family::F: return "F" + std::to_string(index);
      case Family::NegG: return "negG" + std::to_string(index);
      case Family::H: return "H" + std::to_string(index);
      case Family::Phi: return "phi" + std::to_string(index);
      case Family::Psi: return "Psi";
      case Family::Varphi: return "varphi" + std::to_string(index);
    }
    return "?";
  }
  bool operator==(const TargetRef& o) const { return family == o.family && index == o.index; }
};

enum class ConvexificatorKind { Upper, SemiRegular };

inline std::string to_string(ConvexificatorKind k) {
  return k == ConvexificatorKind::Upper ? "upper" : "semiregular";
}

// A declared finite carrier for one target function, anchored at a point.
// Declarations without an explicit anchor bind to the reference point.
struct ConvexificatorDecl {
  TargetRef target;
  ConvexificatorKind kind = ConvexificatorKind::Upper;
  std::optional<QVec> anchor;
  std::vector<QVec> points;
};

struct BilevelProblem {
  std::string name;
  int nx = 0, ny = 0;
  int num_objectives = 0;

  Box x_box, y_box;
  std::optional<Box> theta_box;

  std::vector<PiecewiseFn> upper_numerators;    // F_1..F_n
  std::vector<PiecewiseFn> upper_denominators;  // G_1..G_n
  std::vector<PiecewiseFn> upper_constraints;   // H_1..H_p
  PiecewiseFn lower_objective;                  // f
  std::vector<PiecewiseFn> lower_constraints;   // phi_1..phi_q

  std::optional<QVec> refpoint;
  std::optional<Cone> continuity_cone;  // D
  std::vector<ConvexificatorDecl> convexificators;
  std::optional<bool> assert_pos_xi_closed;
  std::optional<bool> assert_star_shaped;

  int dim() const { return nx + ny; }
  int num_upper_constraints() const { return static_cast<int>(upper_constraints.size()); }
  int num_lower_constraints() const { return static_cast<int>(lower_constraints.size()); }

  // Declared z-box, or the y-box inflated by one unit per coordinate.
  Box theta() const {
    if (theta_box) return *theta_box;
    return y_box.inflated(Rational(1));
  }

  Vec joint(const Vec& x, const Vec& y) const {
    Vec p(x);
    p.insert(p.end(), y.begin(), y.end());
    return p;
  }

  Vec x_part(const Vec& p) const { return Vec(p.begin(), p.begin() + nx); }
  Vec y_part(const Vec& p) const { return Vec(p.begin() + nx, p.end()); }

  const ConvexificatorDecl* find_convexificator(const TargetRef& target,
                                                const QVec& anchor) const {
    for (const auto& d : convexificators) {
      if (!(d.target == target)) continue;
      const QVec* a = d.anchor ? &*d.anchor : (refpoint ? &*refpoint : nullptr);
      if (!a) continue;
      if (*a == anchor) return &d;
    }
    return nullptr;
  }

  const PiecewiseFn& target_function(const TargetRef& t) const {
    switch (t.family) {
      case TargetRef::Family::F: return upper_numerators.at(t.index - 1);
      case TargetRef::Family::NegG: return upper_denominators.at(t.index - 1);
      case TargetRef::Family::H: return upper_constraints.at(t.index - 1);
      case TargetRef::Family::Phi: return lower_constraints.at(t.index - 1);
      default: break;
    }
    throw std::invalid_argument("target " + t.label() + " has no stored function");
  }
};

struct MissingDeclarationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fracbil
