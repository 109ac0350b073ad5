#include "umbilic/chart.hpp"

namespace umbilic {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

std::vector<Point> ChartBox::sample_points(int count) const {
  static const int bases[5] = {2, 3, 5, 7, 11};
  std::vector<Point> out;
  out.reserve(count);
  int idx = 1;
  // margin keeps samples off the box faces where fixtures often degenerate
  const double margin = 1e-3;
  while (static_cast<int>(out.size()) < count && idx < 100 * count + 1000) {
    Point p{};
    for (int i = 0; i < dim_; ++i) {
      const double t = margin + (1.0 - 2.0 * margin) * halton(idx, bases[i]);
      p[i] = lo_[i] + t * (hi_[i] - lo_[i]);
    }
    ++idx;
    if (near_excluded(p)) continue;
    out.push_back(p);
  }
  if (static_cast<int>(out.size()) < count)
    throw NumericError("could not draw enough samples outside excluded sets");
  return out;
}

}  // namespace umbilic
