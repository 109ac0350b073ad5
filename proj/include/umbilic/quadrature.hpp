#pragma once

/// Tensor-product Gauss-Legendre quadrature on chart boxes, with a two-order
/// Richardson-style error estimate, excluded-node rejection, and a doubling
/// truncation schedule for integrals over all of R^n.

#include <functional>
#include <vector>

#include "umbilic/chart.hpp"

namespace umbilic {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  double truncation_radius = 0.0;  // improper integrals only
};

// Nodes/weights on [-1, 1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

using ScalarFn = std::function<double(const Point&)>;

// Integral of f over the box. Nodes falling in the guard zone of an excluded
// set contribute zero. Throws NumericError on a non-finite sample, or when
// `tolerance` > 0 and the error estimate exceeds it.
QuadratureResult integrate_box(const ScalarFn& f, const ChartBox& box, int order, double tolerance = 0.0);

// Integral over R^dim: boxes [-R, R]^dim with dyadic per-axis panels, R
// doubled until |I(2R) - I(R)| falls below tolerance (or rmax is reached).
QuadratureResult integrate_improper(const ScalarFn& f, int dim, double tolerance, int panel_order = 5,
                                    double r0 = 1.0, double rmax = 128.0);

// Deterministic helper: applies fn to 0..count-1 on a small thread pool and
// pairwise-sums the results in index order (independent of thread count).
double parallel_sum(long count, const std::function<double(long)>& fn);

}  // namespace umbilic
