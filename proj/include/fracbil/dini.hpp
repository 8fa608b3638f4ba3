#pragma once

// Dini derivative estimation along a ray, continuity-direction detection,
// and validation of declared convexificator carriers against the support
// inequality. Estimates come from a geometric step schedule; the min/max of
// the difference quotients over the schedule tail stand in for lim inf and
// lim sup.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cone.hpp"
#include "problem.hpp"
#include "sampling.hpp"
#include "vec.hpp"

namespace fracbil {

using ScalarFn = std::function<double(const Vec&)>;

inline ScalarFn as_scalar_fn(const PiecewiseFn& fn) {
  return [&fn](const Vec& p) { return fn.eval_at(p); };
}

struct DiniEstimate {
  double lower = 0;  // min tail quotient, estimates lim inf
  double upper = 0;  // max tail quotient, estimates lim sup
  bool converged = true;
  double oscillation = 0;
};

inline DiniEstimate dini(const ScalarFn& h, const Vec& x, const Vec& d,
                         const StepSchedule& schedule = {}) {
  double h0 = h(x);
  DiniEstimate est;
  bool first = true;
  for (int k = schedule.tail_begin(); k < schedule.steps; ++k) {
    double t = schedule.at(k);
    double q = (h(x + t * d) - h0) / t;
    if (first) {
      est.lower = est.upper = q;
      first = false;
    } else {
      est.lower = std::min(est.lower, q);
      est.upper = std::max(est.upper, q);
    }
  }
  est.oscillation = est.upper - est.lower;
  est.converged = est.oscillation <= 1e-3 * (1.0 + std::fabs(est.upper));
  return est;
}

// Directions d with h(x + t d) -> h(x) along the schedule tail.
inline std::vector<Vec> continuity_directions_sample(const ScalarFn& h, const Vec& x,
                                                     const std::vector<Vec>& dirs,
                                                     const StepSchedule& schedule = {}) {
  double h0 = h(x);
  std::vector<Vec> accepted;
  for (const auto& d : dirs) {
    bool ok = true;
    for (int k = schedule.tail_begin(); k < schedule.steps && ok; ++k) {
      double t = schedule.at(k);
      double v;
      try {
        v = h(x + t * d);
      } catch (const EvalError&) {
        ok = false;
        break;
      }
      if (std::fabs(v - h0) > 1e-4 * (1.0 + std::fabs(h0))) ok = false;
    }
    if (ok) accepted.push_back(d);
  }
  return accepted;
}

struct Convexificator {
  std::vector<QVec> points;
  ConvexificatorKind kind = ConvexificatorKind::Upper;
};

inline Convexificator from_decl(const ConvexificatorDecl& decl) {
  return Convexificator{decl.points, decl.kind};
}

struct DirectionCheck {
  Vec dir;
  double estimate = 0;  // h^- for upper carriers, h^+ for semi-regular ones
  double support = 0;   // max over carrier of <x*, d>
  double margin = 0;    // estimate - support (positive = violation)
  bool pass = true;
  bool converged = true;
};

struct CarrierValidation {
  bool all_pass = true;
  std::vector<DirectionCheck> checks;
  std::vector<DirectionCheck> violations;
};

// Support inequality check per direction: the Dini estimate matching the
// carrier kind must not exceed the carrier's support value (plus slack).
// Violations are conclusive; passes are sampled evidence only.
inline CarrierValidation validate_convexificator(const ScalarFn& h, const Convexificator& c,
                                                 const Vec& x, const std::vector<Vec>& dirs,
                                                 const StepSchedule& schedule = {},
                                                 double slack = 1e-6) {
  CarrierValidation report;
  for (const auto& d : dirs) {
    DiniEstimate est = dini(h, x, d, schedule);
    DirectionCheck chk;
    chk.dir = d;
    chk.estimate = c.kind == ConvexificatorKind::Upper ? est.lower : est.upper;
    chk.converged = est.converged;
    bool first = true;
    for (const auto& p : c.points) {
      double s = dot(to_vec(p), d);
      if (first || s > chk.support) chk.support = s;
      first = false;
    }
    if (c.points.empty()) chk.support = -1e300;
    chk.margin = chk.estimate - chk.support;
    chk.pass = chk.margin <= slack;
    if (!chk.pass) {
      report.all_pass = false;
      report.violations.push_back(chk);
    }
    report.checks.push_back(chk);
  }
  return report;
}

// Default direction set: `count` unit directions filtered by membership in
// the continuity cone, plus the cone's own generators.
inline std::vector<Vec> default_directions(const Cone& D, int count = 64, std::uint64_t seed = 1,
                                           double tol = 1e-9) {
  std::vector<Vec> dirs;
  for (const auto& u : unit_directions(D.dim, count, seed))
    if (cone_membership(D, u, tol)) dirs.push_back(u);
  Cone copy = D;
  for (const auto& g : ensure_generators(copy)) {
    Vec u = normalized(g);
    if (!is_zero(u)) dirs.push_back(u);
  }
  return dirs;
}

}  // namespace fracbil
