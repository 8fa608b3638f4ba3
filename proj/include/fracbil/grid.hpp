#pragma once

// Boxes with per-coordinate closed intervals and grid steps. Grid point
// counts are computed in exact arithmetic so fencepost behaviour does not
// depend on rounding; iteration order is lexicographic.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"
#include "vec.hpp"

namespace fracbil {

struct AxisSpec {
  Rational lo{0}, hi{0}, step{1};
  double lo_d = 0, hi_d = 0, step_d = 1;

  AxisSpec() = default;
  AxisSpec(Rational lo_, Rational hi_, Rational step_)
      : lo(std::move(lo_)), hi(std::move(hi_)), step(std::move(step_)) {
    lo_d = to_double(lo);
    hi_d = to_double(hi);
    step_d = to_double(step);
  }

  long count() const {
    if (step <= 0 || hi < lo) return 0;
    Rational span = (hi - lo) / step;
    mpz_class n;
    mpz_fdiv_q(n.get_mpz_t(), span.get_num().get_mpz_t(), span.get_den().get_mpz_t());
    return static_cast<long>(n.get_si()) + 1;
  }

  double point(long i) const {
    double p = lo_d + static_cast<double>(i) * step_d;
    return p > hi_d ? hi_d : p;
  }
};

struct Box {
  std::vector<AxisSpec> axes;

  int dim() const { return static_cast<int>(axes.size()); }

  bool contains(const Vec& p, double tol = 0) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (p[i] < axes[i].lo_d - tol || p[i] > axes[i].hi_d + tol) return false;
    return true;
  }

  Box inflated(const Rational& amount) const {
    Box b = *this;
    for (auto& a : b.axes) a = AxisSpec(a.lo - amount, a.hi + amount, a.step);
    return b;
  }

  Box with_step(const Rational& step) const {
    Box b = *this;
    for (auto& a : b.axes) a = AxisSpec(a.lo, a.hi, step);
    return b;
  }

  Box with_step_scaled(const Rational& factor) const {
    Box b = *this;
    for (auto& a : b.axes) a = AxisSpec(a.lo, a.hi, a.step * factor);
    return b;
  }

  std::uint64_t total_points() const {
    std::uint64_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::uint64_t>(a.count());
    return n;
  }

  Vec point(std::uint64_t flat) const {
    Vec p(axes.size());
    for (int i = dim() - 1; i >= 0; --i) {
      std::uint64_t c = static_cast<std::uint64_t>(axes[i].count());
      p[i] = axes[i].point(static_cast<long>(flat % c));
      flat /= c;
    }
    return p;
  }

  void validate(const std::string& label) const {
    for (const auto& a : axes) {
      if (a.step <= 0) throw std::invalid_argument(label + ": grid step must be positive");
      if (a.count() < 2) throw std::invalid_argument(label + ": box needs at least 2 grid points per coordinate");
    }
  }
};

inline void for_each_grid_point(const Box& box, const std::function<void(const Vec&)>& fn) {
  std::uint64_t n = box.total_points();
  for (std::uint64_t i = 0; i < n; ++i) fn(box.point(i));
}

}  // namespace fracbil
