#pragma once

/// Box-shaped coordinate charts with optional excluded closed subsets.

#include <array>
#include <cmath>
#include <vector>

#include "umbilic/errors.hpp"

namespace umbilic {

// Points are padded to capacity; the live dimension comes from context.
using Point = std::array<double, 5>;

struct ExcludedSet {
  Point center{};
  double radius = 0.0;
};

class ChartBox {
 public:
  ChartBox() = default;
  ChartBox(int dim, std::vector<std::array<double, 2>> intervals)
      : dim_(dim) {
    if (dim < 1 || dim > 5) throw ValidationError("chart dimension must be in 1..5");
    if (static_cast<int>(intervals.size()) != dim) throw ValidationError("interval count != dimension");
    for (int i = 0; i < dim; ++i) {
      if (!(intervals[i][0] < intervals[i][1])) throw ValidationError("empty chart interval");
      lo_[i] = intervals[i][0];
      hi_[i] = intervals[i][1];
    }
  }

  int dim() const { return dim_; }
  double lo(int i) const { return lo_[i]; }
  double hi(int i) const { return hi_[i]; }
  bool unbounded() const { return unbounded_; }
  void set_unbounded(bool u) { unbounded_ = u; }

  void add_excluded(const ExcludedSet& e) { excluded_.push_back(e); }
  const std::vector<ExcludedSet>& excluded() const { return excluded_; }

  double guard_fraction() const { return guard_fraction_; }
  void set_guard_fraction(double f) { guard_fraction_ = f; }

  double diameter() const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
    return std::sqrt(s);
  }

  Point center() const {
    Point p{};
    for (int i = 0; i < dim_; ++i) p[i] = 0.5 * (lo_[i] + hi_[i]);
    return p;
  }

  bool contains(const Point& p) const {
    for (int i = 0; i < dim_; ++i)
      if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return !near_excluded(p);
  }

  // True when p lies within guard distance of an excluded set.
  bool near_excluded(const Point& p) const {
    if (excluded_.empty()) return false;
    const double guard = guard_fraction_ * diameter();
    for (const auto& e : excluded_) {
      double d2 = 0;
      for (int i = 0; i < dim_; ++i) d2 += (p[i] - e.center[i]) * (p[i] - e.center[i]);
      if (std::sqrt(d2) <= e.radius + guard) return true;
    }
    return false;
  }

  // Low-discrepancy interior samples (Halton, shifted away from faces).
  std::vector<Point> sample_points(int count) const;

 private:
  int dim_ = 0;
  std::array<double, 5> lo_{};
  std::array<double, 5> hi_{};
  std::vector<ExcludedSet> excluded_;
  double guard_fraction_ = 1e-3;
  bool unbounded_ = false;
};

double halton(int index, int base);

}  // namespace umbilic
