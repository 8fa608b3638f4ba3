#pragma once

// Sampled contingent-cone and local star-shapedness checks against a
// point-membership oracle. A direction is accepted when, for every step in
// the schedule tail, some perturbation of the direction within radius r(t)
// lands inside the set; with the perturbation disabled this is the weak
// feasible-direction test, which the contingent test dominates.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cone.hpp"
#include "grid.hpp"
#include "sampling.hpp"
#include "vec.hpp"

namespace fracbil {

using MembershipOracle = std::function<bool(const Vec&)>;

struct TangentConfig {
  StepSchedule schedule{0.1, 0.5, 21, 6};
  double radius_factor = 10.0;  // r(t) = radius_factor * t
  int probes = 12;              // random perturbations tried per step
  std::uint64_t seed = 1;
};

enum class DirectionVerdict { In, Out };

inline DirectionVerdict tangent_direction_test(const MembershipOracle& member, const Vec& base,
                                               const Vec& dir, const TangentConfig& cfg = {}) {
  const int d = static_cast<int>(base.size());
  std::mt19937_64 rng(cfg.seed);
  for (int k = cfg.schedule.tail_begin(); k < cfg.schedule.steps; ++k) {
    double t = cfg.schedule.at(k);
    double radius = cfg.radius_factor * t;
    bool hit = member(base + t * dir);
    for (int p = 0; p < cfg.probes && !hit; ++p) {
      Vec offset = random_unit_vector(rng, d);
      double scale = radius * (p % 3 == 0 ? 0.25 : p % 3 == 1 ? 0.5 : 1.0);
      hit = member(base + t * (dir + scale * offset));
    }
    if (!hit) return DirectionVerdict::Out;
  }
  return DirectionVerdict::In;
}

inline std::vector<DirectionVerdict> tangent_cone_sample(const MembershipOracle& member,
                                                         const Vec& base,
                                                         const std::vector<Vec>& dirs,
                                                         const TangentConfig& cfg = {}) {
  std::vector<DirectionVerdict> out;
  out.reserve(dirs.size());
  for (const auto& dir : dirs) out.push_back(tangent_direction_test(member, base, dir, cfg));
  return out;
}

// Fixed-direction variant: no perturbation allowed.
inline bool weak_direction_test(const MembershipOracle& member, const Vec& base, const Vec& dir,
                                const StepSchedule& schedule = {0.1, 0.5, 21, 6}) {
  for (int k = schedule.tail_begin(); k < schedule.steps; ++k)
    if (!member(base + schedule.at(k) * dir)) return false;
  return true;
}

// Normal cone at the origin for a set given only through a membership
// oracle (possibly nonconvex): the polar of the sampled tangent cone.
inline Cone normal_cone_at_origin_sampled(const MembershipOracle& member, int dim,
                                          int direction_count = 128,
                                          const TangentConfig& cfg = {}) {
  std::vector<Vec> accepted;
  for (const auto& d : unit_directions(dim, direction_count, cfg.seed))
    if (tangent_direction_test(member, Vec(dim, 0.0), d, cfg) == DirectionVerdict::In)
      accepted.push_back(d);
  if (accepted.empty()) return polar(Cone::zero_cone(dim));
  return polar(pos_hull(accepted, dim));
}

struct StarShapedWitness {
  Vec point;
  double lambda = 0;
};

struct StarShapedReport {
  enum class Verdict { Supported, Violated } verdict = Verdict::Supported;
  std::optional<StarShapedWitness> witness;
  int points_tested = 0;
};

struct InsufficientSamplesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Draws random grid points accepted by the oracle and checks that an
// initial segment of each chord from the base stays inside the set.
// Segment fractions are {0.1..0.9} of a fixed a = 0.5.
inline StarShapedReport star_shaped_sample(const MembershipOracle& member, const Vec& base,
                                           const Box& sample_domain, int samples,
                                           std::uint64_t seed = 1) {
  StarShapedReport report;
  std::mt19937_64 rng(seed);
  const std::uint64_t total = sample_domain.total_points();
  // The feasible set can be a measure-zero slice of the box, so the budget
  // is generous relative to the requested sample count.
  const int max_attempts = samples * 4000;
  int found = 0;
  for (int attempt = 0; attempt < max_attempts && found < samples; ++attempt) {
    Vec x = sample_domain.point(rng() % total);
    if (!member(x)) continue;
    ++found;
    for (int i = 1; i <= 9; ++i) {
      double lambda = 0.1 * i * 0.5;
      Vec probe = base + lambda * (x - base);
      if (!member(probe)) {
        report.verdict = StarShapedReport::Verdict::Violated;
        report.witness = StarShapedWitness{x, lambda};
        report.points_tested = found;
        return report;
      }
    }
  }
  if (found < samples)
    throw InsufficientSamplesError("star-shaped check: found only " + std::to_string(found) +
                                   " of " + std::to_string(samples) + " feasible sample points");
  report.points_tested = found;
  return report;
}

}  // namespace fracbil
