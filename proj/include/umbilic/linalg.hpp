#pragma once

/// Small dense matrices (capacity 5x5) over double or jet scalars.

#include <array>
#include <cmath>
#include <vector>

#include "umbilic/errors.hpp"
#include "umbilic/jet.hpp"

namespace umbilic {

template <class T>
struct SqMat {
  int n = 0;
  std::array<T, kMaxDim * kMaxDim> a{};

  SqMat() = default;
  explicit SqMat(int dim) : n(dim) {}

  T& operator()(int i, int j) { return a[i * kMaxDim + j]; }
  const T& operator()(int i, int j) const { return a[i * kMaxDim + j]; }
};

using Mat = SqMat<double>;

namespace detail {
inline double pivot_size(double x) { return std::abs(x); }
template <int K>
double pivot_size(const JetT<K>& x) {
  return std::abs(x.value());
}
}  // namespace detail

template <class T>
T make_scalar(double c) {
  return T::constant(c);
}
template <>
inline double make_scalar<double>(double c) {
  return c;
}

// Gauss-Jordan inverse with partial pivoting on the value part.
template <class T>
SqMat<T> mat_inverse(const SqMat<T>& m) {
  const int n = m.n;
  SqMat<T> w = m;
  SqMat<T> inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = make_scalar<T>(i == j ? 1.0 : 0.0);

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = detail::pivot_size(w(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double s = detail::pivot_size(w(r, col));
      if (s > best) best = s, piv = r;
    }
    if (best == 0.0) throw NumericError("singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(w(col, j), w(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    }
    const T d = w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) = w(col, j) / d;
      inv(col, j) = inv(col, j) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = w(r, col);
      if (detail::pivot_size(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        w(r, j) = w(r, j) - f * w(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

// Cholesky factorization; returns false when not positive definite.
inline bool cholesky(const Mat& m, Mat* lower = nullptr) {
  const int n = m.n;
  Mat L(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  if (lower) *lower = L;
  return true;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> sym_eigenvalues(Mat m);

// Eigenvalues of the pencil h v = lambda g v with g positive definite:
// similar to the symmetric matrix L^-1 h L^-T where g = L L^T.
std::vector<double> generalized_sym_eigenvalues(const Mat& h, const Mat& g);

inline Mat mat_mul(const Mat& a, const Mat& b) {
  Mat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      double s = 0;
      for (int k = 0; k < a.n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

}  // namespace umbilic
