#pragma once

// Canonical problem-file printer. Output reparses to a problem whose
// functions agree branch-for-branch with the original.

#include <sstream>
#include <string>

#include "problem.hpp"

namespace fracbil {

namespace detail {

inline std::string to_string(const Region& r) {
  if (r.conditions.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    if (i) s += " && ";
    const Condition& c = r.conditions[i];
    s += fracbil::to_string(*c.lhs) + " " + fracbil::to_string(c.cmp) + " " +
         fracbil::to_string(*c.rhs);
  }
  return s;
}

inline std::string to_string(const PiecewiseFn& fn) {
  std::string s = "piecewise{ ";
  for (std::size_t i = 0; i < fn.branches.size(); ++i) {
    if (i) s += " ; ";
    s += to_string(fn.branches[i].first) + " : " + fracbil::to_string(*fn.branches[i].second);
  }
  return s + " }";
}

inline void print_box(std::ostream& out, const std::string& keyword, const std::string& block,
                      const Box& box) {
  for (std::size_t i = 0; i < box.axes.size(); ++i) {
    const AxisSpec& a = box.axes[i];
    out << keyword << " " << block << "[" << i << "] in [" << format_rational(a.lo) << ", "
        << format_rational(a.hi) << "] step " << format_rational(a.step) << "\n";
  }
}

}  // namespace detail

inline std::string print_problem(const BilevelProblem& prob) {
  std::ostringstream out;
  out << "problem \"" << prob.name << "\"\n";
  out << "dims x=" << prob.nx << " y=" << prob.ny << " objectives=" << prob.num_objectives
      << "\n";
  detail::print_box(out, "box", "x", prob.x_box);
  detail::print_box(out, "box", "y", prob.y_box);
  if (prob.theta_box) detail::print_box(out, "theta", "z", *prob.theta_box);
  for (int k = 0; k < prob.num_objectives; ++k)
    out << "F" << k + 1 << " = " << detail::to_string(prob.upper_numerators[k]) << "\n";
  for (int k = 0; k < prob.num_objectives; ++k)
    out << "G" << k + 1 << " = " << detail::to_string(prob.upper_denominators[k]) << "\n";
  for (int j = 0; j < prob.num_upper_constraints(); ++j)
    out << "H" << j + 1 << " = " << detail::to_string(prob.upper_constraints[j]) << "\n";
  out << "f = " << detail::to_string(prob.lower_objective) << "\n";
  for (int s = 0; s < prob.num_lower_constraints(); ++s)
    out << "phi" << s + 1 << " = " << detail::to_string(prob.lower_constraints[s]) << "\n";
  if (prob.refpoint) out << "refpoint = " << format_vec(*prob.refpoint) << "\n";
  if (prob.continuity_cone && prob.continuity_cone->orthant) {
    out << "D = orthant(";
    const auto& signs = *prob.continuity_cone->orthant;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (i) out << ", ";
      switch (signs[i]) {
        case SignRestriction::NonNegative: out << "+"; break;
        case SignRestriction::NonPositive: out << "-"; break;
        default: out << "*"; break;
      }
    }
    out << ")\n";
  }
  for (const auto& d : prob.convexificators) {
    out << "convexificator " << d.target.label() << " " << to_string(d.kind);
    if (d.anchor) out << " at " << format_vec(*d.anchor);
    out << " = { ";
    for (std::size_t i = 0; i < d.points.size(); ++i) {
      if (i) out << ", ";
      out << format_vec(d.points[i]);
    }
    out << " }\n";
  }
  if (prob.assert_pos_xi_closed)
    out << "assert pos_xi_closed = " << (*prob.assert_pos_xi_closed ? "true" : "false") << "\n";
  if (prob.assert_star_shaped)
    out << "assert star_shaped = " << (*prob.assert_star_shaped ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace fracbil
