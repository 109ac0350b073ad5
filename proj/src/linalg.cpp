#include "umbilic/linalg.hpp"

#include <algorithm>

namespace umbilic {

std::vector<double> sym_eigenvalues(Mat m) {
  const int n = m.n;
  // cyclic Jacobi; plenty for n <= 5
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> generalized_sym_eigenvalues(const Mat& h, const Mat& g) {
  const int n = g.n;
  Mat L(n);
  if (!cholesky(g, &L)) throw NumericError("metric not positive definite in eigenvalue solve");
  // B = L^-1 h L^-T by two triangular solves
  Mat y(n);
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = h(i, col);
      for (int k = 0; k < i; ++k) s -= L(i, k) * y(k, col);
      y(i, col) = s / L(i, i);
    }
  }
  Mat b(n);
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < n; ++j) {
      double s = y(row, j);
      for (int k = 0; k < j; ++k) s -= L(j, k) * b(row, k);
      b(row, j) = s / L(j, j);
    }
  }
  // symmetrize against roundoff
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = b(j, i) = avg;
    }
  return sym_eigenvalues(b);
}

}  // namespace umbilic
