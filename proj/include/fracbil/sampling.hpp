#pragma once

// Deterministic sampling utilities: seeded RNG helpers, geometric step
// schedules, and unit-direction generators.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vec.hpp"

namespace fracbil {

// Portable uniform in [0, 1): take 53 bits straight from the generator so
// the stream does not depend on library distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller on the portable uniform.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline Vec random_unit_vector(std::mt19937_64& rng, int dim) {
  Vec v(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) v[i] = gaussian(rng);
    double n = norm(v);
    if (n > 1e-12) return (1.0 / n) * v;
  }
}

// count unit directions: equally spaced on the circle for dim 2, seeded
// random on the sphere otherwise.
inline std::vector<Vec> unit_directions(int dim, int count, std::uint64_t seed = 1) {
  std::vector<Vec> dirs;
  dirs.reserve(count);
  if (dim == 1) {
    dirs.push_back({1.0});
    if (count > 1) dirs.push_back({-1.0});
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 6.283185307179586 * i / count;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) dirs.push_back(random_unit_vector(rng, dim));
  return dirs;
}

// Geometric step schedule t_k = t0 * factor^k, k = 0..steps-1. The last
// `tail` steps form the window over which limits are estimated.
struct StepSchedule {
  double t0 = 0.1;
  double factor = 0.5;
  int steps = 25;
  int tail = 8;

  double at(int k) const { return t0 * std::pow(factor, k); }
  int tail_begin() const { return steps - tail; }
};

}  // namespace fracbil
