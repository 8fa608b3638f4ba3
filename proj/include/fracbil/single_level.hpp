#pragma once

// Single-level machinery: the signed distance to the nonpositive orthant,
// the auxiliary max-min function over the compact z-box, the lower-level
// solution map on the grid, membership in the reformulated feasible set,
// and the brute-force weak-Pareto oracle.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "grid.hpp"
#include "problem.hpp"

namespace fracbil {

// Signed distance of u to the orthant {v : v <= 0}: the largest coordinate
// inside the orthant (negative depth), the norm of the positive part
// outside. Convex, positively homogeneous, 1-Lipschitz.
inline double signed_distance_orthant(const Vec& u) {
  if (u.empty()) throw std::invalid_argument("signed distance needs dimension >= 1");
  double max_coord = u[0];
  double pos_sq = 0;
  bool outside = false;
  for (double v : u) {
    max_coord = std::max(max_coord, v);
    if (v > 0) {
      outside = true;
      pos_sq += v * v;
    }
  }
  return outside ? std::sqrt(pos_sq) : max_coord;
}

// min{ f(x,y) - f(x,z), -dist(phi(x,z)) }: positive exactly when z is a
// strictly feasible lower-level point improving on y.
inline double psi(const BilevelProblem& prob, const Vec& x, const Vec& y, const Vec& z) {
  Vec xy = prob.joint(x, y);
  Vec xz = prob.joint(x, z);
  double objective_gap = prob.lower_objective.eval_at(xy) - prob.lower_objective.eval_at(xz);
  Vec constraint_values(prob.num_lower_constraints());
  for (int s = 0; s < prob.num_lower_constraints(); ++s)
    constraint_values[s] = prob.lower_constraints[s].eval_at(xz);
  return std::min(objective_gap, -signed_distance_orthant(constraint_values));
}

// Grid maximum of psi over the compact z-box.
inline double capital_psi(const BilevelProblem& prob, const Vec& x, const Vec& y,
                          const std::optional<Rational>& step_override = std::nullopt) {
  Box theta = prob.theta();
  if (step_override) theta = theta.with_step(*step_override);
  double best = -1e300;
  for_each_grid_point(theta, [&](const Vec& z) { best = std::max(best, psi(prob, x, y, z)); });
  return best;
}

struct LowerLevelResult {
  std::vector<Vec> solutions;  // grid minimizers of f(x, .) on the feasible y-grid
  double min_value = 0;
  bool empty_feasible = false;
};

inline LowerLevelResult lower_level_solutions(const BilevelProblem& prob, const Vec& x,
                                              double value_tol = 1e-6, double feas_tol = 1e-9,
                                              const std::optional<Rational>& step_override =
                                                  std::nullopt) {
  Box ybox = prob.y_box;
  if (step_override) ybox = ybox.with_step(*step_override);
  std::vector<std::pair<Vec, double>> feasible;
  for_each_grid_point(ybox, [&](const Vec& y) {
    Vec xy = prob.joint(x, y);
    for (const auto& c : prob.lower_constraints)
      if (c.eval_at(xy) > feas_tol) return;
    feasible.emplace_back(y, prob.lower_objective.eval_at(xy));
  });
  LowerLevelResult result;
  if (feasible.empty()) {
    result.empty_feasible = true;
    return result;
  }
  result.min_value = feasible[0].second;
  for (const auto& [y, v] : feasible) result.min_value = std::min(result.min_value, v);
  for (const auto& [y, v] : feasible)
    if (v <= result.min_value + value_tol) result.solutions.push_back(y);
  return result;
}

// Membership in the reformulated feasible set: upper constraints, lower
// constraints, and the auxiliary function all within feas_tol. The optional
// z-step override refines the auxiliary-function grid; membership near the
// boundary is resolution-limited, and a finer z-grid rejects grid-only
// members whose improving lower-level point falls between coarse nodes.
inline bool is_in_E(const BilevelProblem& prob, const Vec& x, const Vec& y,
                    double feas_tol = 1e-9, int theta_refine = 1) {
  Vec xy = prob.joint(x, y);
  for (const auto& c : prob.upper_constraints)
    if (c.eval_at(xy) > feas_tol) return false;
  for (const auto& c : prob.lower_constraints)
    if (c.eval_at(xy) > feas_tol) return false;
  double psi_max;
  if (theta_refine > 1) {
    Box theta = prob.theta().with_step_scaled(Rational(1, theta_refine));
    psi_max = -1e300;
    for_each_grid_point(theta,
                        [&](const Vec& z) { psi_max = std::max(psi_max, psi(prob, x, y, z)); });
  } else {
    psi_max = capital_psi(prob, x, y);
  }
  return psi_max <= feas_tol;
}

inline Vec objective_values(const BilevelProblem& prob, const Vec& point) {
  Vec phi(prob.num_objectives);
  for (int k = 0; k < prob.num_objectives; ++k) {
    double num = prob.upper_numerators[k].eval_at(point);
    double den = prob.upper_denominators[k].eval_at(point);
    if (den == 0) throw EvalError("objective denominator vanishes at " + format_vec(point));
    phi[k] = num / den;
  }
  return phi;
}

struct FeasiblePoint {
  Vec point;       // joint (x, y)
  Vec objectives;  // ratio vector at the point
};

struct OracleConfig {
  double feas_tol = 1e-9;
  double value_tol = 1e-6;
  double dominance_tol = 1e-7;
  std::optional<Rational> step_override;
  int jobs = 1;
};

struct OracleResult {
  bool checked_point = false;
  Vec point;
  Vec point_objectives;
  bool weak_pareto = true;
  std::optional<FeasiblePoint> dominator;
  std::vector<FeasiblePoint> pareto_points;
  std::size_t feasible_count = 0;
};

// Grid sample of the bilevel feasible set: x on its grid, y a lower-level
// grid minimizer, upper constraints within tolerance. Denominators must be
// positive on the result.
inline std::vector<FeasiblePoint> enumerate_feasible(const BilevelProblem& prob,
                                                     const OracleConfig& cfg = {}) {
  Box xbox = prob.x_box;
  if (cfg.step_override) xbox = xbox.with_step(*cfg.step_override);
  const std::uint64_t nx_points = xbox.total_points();

  std::vector<std::vector<FeasiblePoint>> per_x(nx_points);
  auto scan_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Vec x = xbox.point(i);
      LowerLevelResult lower =
          lower_level_solutions(prob, x, cfg.value_tol, cfg.feas_tol, cfg.step_override);
      for (const auto& y : lower.solutions) {
        Vec xy = prob.joint(x, y);
        bool ok = true;
        for (const auto& c : prob.upper_constraints)
          if (c.eval_at(xy) > cfg.feas_tol) {
            ok = false;
            break;
          }
        if (!ok) continue;
        per_x[i].push_back({xy, {}});
      }
    }
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || nx_points < 2) {
    scan_range(0, nx_points);
  } else {
    std::vector<std::thread> workers;
    std::uint64_t chunk = (nx_points + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      std::uint64_t begin = w * chunk;
      std::uint64_t end = std::min(nx_points, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(scan_range, begin, end);
    }
    for (auto& t : workers) t.join();
  }

  std::vector<FeasiblePoint> feasible;
  for (auto& bucket : per_x)
    for (auto& fp : bucket) {
      fp.objectives = objective_values(prob, fp.point);
      for (int k = 0; k < prob.num_objectives; ++k) {
        double den = prob.upper_denominators[k].eval_at(fp.point);
        if (den <= 0)
          throw EvalError("denominator G" + std::to_string(k + 1) +
                          " not positive on the feasible grid at " + format_vec(fp.point));
      }
      feasible.push_back(std::move(fp));
    }
  return feasible;
}

inline bool strictly_dominates(const Vec& a, const Vec& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] < b[k] - tol)) return false;
  return true;
}

inline OracleResult weak_pareto_oracle(const BilevelProblem& prob,
                                       const std::optional<Vec>& check_point,
                                       const OracleConfig& cfg = {}) {
  std::vector<FeasiblePoint> feasible = enumerate_feasible(prob, cfg);
  if (feasible.empty()) throw std::runtime_error("weak-Pareto oracle: empty feasible grid");

  OracleResult result;
  result.feasible_count = feasible.size();
  if (check_point) {
    result.checked_point = true;
    result.point = *check_point;
    result.point_objectives = objective_values(prob, *check_point);
    for (const auto& fp : feasible) {
      if (strictly_dominates(fp.objectives, result.point_objectives, cfg.dominance_tol)) {
        result.weak_pareto = false;
        result.dominator = fp;
        break;
      }
    }
    return result;
  }
  for (const auto& fp : feasible) {
    bool dominated = false;
    for (const auto& other : feasible)
      if (strictly_dominates(other.objectives, fp.objectives, cfg.dominance_tol)) {
        dominated = true;
        break;
      }
    if (!dominated) result.pareto_points.push_back(fp);
  }
  return result;
}

// F_k - ratio * G_k with ratio = F_k/G_k frozen at the anchor; vanishes at
// the anchor by construction.
struct ScalarizedObjective {
  int index = 1;  // 1-based
  Rational ratio;
  PiecewiseFn fn;
};

inline Rational objective_ratio_exact(const BilevelProblem& prob, int k, const QVec& anchor) {
  const PiecewiseFn& num = prob.upper_numerators.at(k - 1);
  const PiecewiseFn& den = prob.upper_denominators.at(k - 1);
  Rational g;
  Rational f;
  try {
    f = num.eval_exact_at(anchor);
    g = den.eval_exact_at(anchor);
  } catch (const NotExactError&) {
    Vec p = to_vec(anchor);
    f = Rational(num.eval_at(p));
    g = Rational(den.eval_at(p));
  }
  if (g == 0) throw EvalError("objective denominator vanishes at the anchor");
  return f / g;
}

inline ScalarizedObjective make_scalarization(const BilevelProblem& prob, int k,
                                              const QVec& anchor) {
  ScalarizedObjective s;
  s.index = k;
  s.ratio = objective_ratio_exact(prob, k, anchor);
  Rational neg_ratio = -s.ratio;
  s.fn = linear_combination("varphi" + std::to_string(k), prob.upper_numerators.at(k - 1),
                            Rational(1), prob.upper_denominators.at(k - 1), neg_ratio);
  return s;
}

}  // namespace fracbil
