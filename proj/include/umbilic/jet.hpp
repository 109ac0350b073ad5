#pragma once

/// Truncated multivariate Taylor arithmetic (forward-mode, up to third order).
///
/// A JetT<K> carries the value and all partial derivatives of a quantity up
/// to order min(K, 3) in at most kMaxDim variables. All arithmetic applies
/// the exact Leibniz / Faa di Bruno rules, so derivatives of any composite
/// built from the supported operations are exact to machine precision.

#include <array>
#include <cmath>
#include <cstring>

#include "umbilic/errors.hpp"

namespace umbilic {

inline constexpr int kMaxDim = 5;

namespace detail {
struct NoStore {};
}  // namespace detail

template <int MaxOrder>
class JetT {
  static_assert(MaxOrder >= 0 && MaxOrder <= 3);

 public:
  JetT() = default;

  static JetT constant(double c) {
    JetT j;
    j.v_ = c;
    j.n_ = 0;  // broadcasts against any dimension
    return j;
  }

  static JetT variable(double x, int index, int dim, int order = MaxOrder) {
    JetT j;
    j.v_ = x;
    j.n_ = dim;
    j.order_ = order < MaxOrder ? order : MaxOrder;
    if constexpr (MaxOrder >= 1) {
      if (j.order_ >= 1) j.d1_[index] = 1.0;
    }
    return j;
  }

  int dim() const { return n_; }
  int order() const { return order_; }
  double value() const { return v_; }

  double d1(int i) const {
    if constexpr (MaxOrder >= 1) return d1_[i];
    return 0.0;
  }
  double d2(int i, int j) const {
    if constexpr (MaxOrder >= 2) return d2_[i * kMaxDim + j];
    (void)i, (void)j;
    return 0.0;
  }
  double d3(int i, int j, int k) const {
    if constexpr (MaxOrder >= 3) return d3_[(i * kMaxDim + j) * kMaxDim + k];
    (void)i, (void)j, (void)k;
    return 0.0;
  }

  void set_d1(int i, double x) {
    if constexpr (MaxOrder >= 1) d1_[i] = x;
  }
  void set_d2(int i, int j, double x) {
    if constexpr (MaxOrder >= 2) d2_[i * kMaxDim + j] = x;
  }
  void set_d3(int i, int j, int k, double x) {
    if constexpr (MaxOrder >= 3) d3_[(i * kMaxDim + j) * kMaxDim + k] = x;
  }
  void set_dim(int n) { n_ = n; }
  void set_order(int o) { order_ = o; }

  // Derivative extraction: the jet of df/dx_i, one order lower.
  JetT partial(int i) const {
    JetT r;
    r.n_ = n_;
    r.order_ = order_ - 1;
    if (r.order_ < 0) throw NumericError("jet partial: order exhausted");
    r.v_ = d1(i);
    if constexpr (MaxOrder >= 2) {
      if (r.order_ >= 1)
        for (int j = 0; j < n_; ++j) r.d1_[j] = d2(i, j);
    }
    if constexpr (MaxOrder >= 3) {
      if (r.order_ >= 2)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k) r.d2_[j * kMaxDim + k] = d3(i, j, k);
    }
    return r;
  }

  bool finite() const {
    if (!std::isfinite(v_)) return false;
    if constexpr (MaxOrder >= 1) {
      if (order_ >= 1)
        for (int i = 0; i < n_; ++i)
          if (!std::isfinite(d1_[i])) return false;
    }
    if constexpr (MaxOrder >= 2) {
      if (order_ >= 2)
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            if (!std::isfinite(d2_[i * kMaxDim + j])) return false;
    }
    if constexpr (MaxOrder >= 3) {
      if (order_ >= 3)
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
              if (!std::isfinite(d3_[(i * kMaxDim + j) * kMaxDim + k])) return false;
    }
    return true;
  }

  friend JetT operator-(const JetT& a) {
    JetT r = a;
    r.v_ = -r.v_;
    if constexpr (MaxOrder >= 1)
      for (double& x : r.d1_) x = -x;
    if constexpr (MaxOrder >= 2)
      for (double& x : r.d2_) x = -x;
    if constexpr (MaxOrder >= 3)
      for (double& x : r.d3_) x = -x;
    return r;
  }

  friend JetT operator+(const JetT& a, const JetT& b) {
    JetT r;
    merge_shape(a, b, r);
    r.v_ = a.v_ + b.v_;
    if constexpr (MaxOrder >= 1)
      for (int i = 0; i < static_cast<int>(a.d1_.size()); ++i) r.d1_[i] = a.d1_[i] + b.d1_[i];
    if constexpr (MaxOrder >= 2)
      for (int i = 0; i < static_cast<int>(a.d2_.size()); ++i) r.d2_[i] = a.d2_[i] + b.d2_[i];
    if constexpr (MaxOrder >= 3)
      for (int i = 0; i < static_cast<int>(a.d3_.size()); ++i) r.d3_[i] = a.d3_[i] + b.d3_[i];
    return r;
  }

  friend JetT operator-(const JetT& a, const JetT& b) { return a + (-b); }

  friend JetT operator*(const JetT& a, const JetT& b) {
    JetT r;
    merge_shape(a, b, r);
    const int n = r.n_;
    r.v_ = a.v_ * b.v_;
    if constexpr (MaxOrder >= 1) {
      if (r.order_ >= 1)
        for (int i = 0; i < n; ++i) r.d1_[i] = a.d1_[i] * b.v_ + a.v_ * b.d1_[i];
    }
    if constexpr (MaxOrder >= 2) {
      if (r.order_ >= 2)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            r.d2_[i * kMaxDim + j] = a.d2_[i * kMaxDim + j] * b.v_ + a.v_ * b.d2_[i * kMaxDim + j] +
                                     a.d1_[i] * b.d1_[j] + a.d1_[j] * b.d1_[i];
    }
    if constexpr (MaxOrder >= 3) {
      if (r.order_ >= 3)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              double s = a.d3(i, j, k) * b.v_ + a.v_ * b.d3(i, j, k);
              s += a.d2(i, j) * b.d1_[k] + a.d2(i, k) * b.d1_[j] + a.d2(j, k) * b.d1_[i];
              s += b.d2(i, j) * a.d1_[k] + b.d2(i, k) * a.d1_[j] + b.d2(j, k) * a.d1_[i];
              r.d3_[(i * kMaxDim + j) * kMaxDim + k] = s;
            }
    }
    return r;
  }

  friend JetT operator/(const JetT& a, const JetT& b) {
    if (b.v_ == 0.0) throw DomainError("division by zero");
    const double iv = 1.0 / b.v_;
    std::array<double, MaxOrder + 1> fd{};
    fd[0] = iv;
    if constexpr (MaxOrder >= 1) fd[1] = -iv * iv;
    if constexpr (MaxOrder >= 2) fd[2] = 2.0 * iv * iv * iv;
    if constexpr (MaxOrder >= 3) fd[3] = -6.0 * iv * iv * iv * iv;
    return a * b.compose(fd);
  }

  friend JetT operator+(const JetT& a, double c) { return a + constant(c); }
  friend JetT operator+(double c, const JetT& a) { return constant(c) + a; }
  friend JetT operator-(const JetT& a, double c) { return a + constant(-c); }
  friend JetT operator-(double c, const JetT& a) { return constant(c) - a; }
  friend JetT operator*(const JetT& a, double c) {
    JetT r = a;
    r.v_ *= c;
    if constexpr (MaxOrder >= 1)
      for (double& x : r.d1_) x *= c;
    if constexpr (MaxOrder >= 2)
      for (double& x : r.d2_) x *= c;
    if constexpr (MaxOrder >= 3)
      for (double& x : r.d3_) x *= c;
    return r;
  }
  friend JetT operator*(double c, const JetT& a) { return a * c; }
  friend JetT operator/(const JetT& a, double c) { return a * (1.0 / c); }
  friend JetT operator/(double c, const JetT& a) { return constant(c) / a; }

  // Univariate chain rule: fd[k] = f^{(k)} at this->value().
  JetT compose(const std::array<double, MaxOrder + 1>& fd) const {
    JetT r;
    r.n_ = n_;
    r.order_ = order_;
    const int n = n_;
    r.v_ = fd[0];
    if constexpr (MaxOrder >= 1) {
      if (order_ >= 1)
        for (int i = 0; i < n; ++i) r.d1_[i] = fd[1] * d1_[i];
    }
    if constexpr (MaxOrder >= 2) {
      if (order_ >= 2)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            r.d2_[i * kMaxDim + j] = fd[2] * d1_[i] * d1_[j] + fd[1] * d2(i, j);
    }
    if constexpr (MaxOrder >= 3) {
      if (order_ >= 3)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              double s = fd[3] * d1_[i] * d1_[j] * d1_[k];
              s += fd[2] * (d2(i, j) * d1_[k] + d2(i, k) * d1_[j] + d2(j, k) * d1_[i]);
              s += fd[1] * d3(i, j, k);
              r.d3_[(i * kMaxDim + j) * kMaxDim + k] = s;
            }
    }
    return r;
  }

 private:
  static void merge_shape(const JetT& a, const JetT& b, JetT& r) {
    r.n_ = a.n_ >= b.n_ ? a.n_ : b.n_;
    r.order_ = a.order_ <= b.order_ ? a.order_ : b.order_;
  }

  int n_ = 0;
  int order_ = MaxOrder;
  double v_ = 0.0;
  [[no_unique_address]] std::conditional_t<MaxOrder >= 1, std::array<double, kMaxDim>, detail::NoStore> d1_{};
  [[no_unique_address]] std::conditional_t<MaxOrder >= 2, std::array<double, kMaxDim * kMaxDim>, detail::NoStore>
      d2_{};
  [[no_unique_address]] std::conditional_t<MaxOrder >= 3, std::array<double, kMaxDim * kMaxDim * kMaxDim>,
                                           detail::NoStore>
      d3_{};
};

using Jet0 = JetT<0>;
using Jet1 = JetT<1>;
using Jet2 = JetT<2>;
using Jet3 = JetT<3>;

// Scalar derivative tables for the built-in functions, f^{(0..order)} at x.
// Throws DomainError outside the natural domain.
void scalar_derivs(int func, double x, int order, double* out);  // see expr.hpp for func ids

template <int K>
JetT<K> jet_sqrt(const JetT<K>& a) {
  if (a.value() <= 0.0) throw DomainError("sqrt of nonpositive value");
  const double s = std::sqrt(a.value());
  std::array<double, K + 1> fd{};
  fd[0] = s;
  if constexpr (K >= 1) fd[1] = 0.5 / s;
  if constexpr (K >= 2) fd[2] = -0.25 / (s * a.value());
  if constexpr (K >= 3) fd[3] = 0.375 / (s * a.value() * a.value());
  return a.compose(fd);
}

template <int K>
JetT<K> jet_exp(const JetT<K>& a) {
  const double e = std::exp(a.value());
  std::array<double, K + 1> fd{};
  for (int i = 0; i <= K; ++i) fd[i] = e;
  return a.compose(fd);
}

template <int K>
JetT<K> jet_log(const JetT<K>& a) {
  if (a.value() <= 0.0) throw DomainError("log of nonpositive value");
  const double iv = 1.0 / a.value();
  std::array<double, K + 1> fd{};
  fd[0] = std::log(a.value());
  if constexpr (K >= 1) fd[1] = iv;
  if constexpr (K >= 2) fd[2] = -iv * iv;
  if constexpr (K >= 3) fd[3] = 2.0 * iv * iv * iv;
  return a.compose(fd);
}

// Smooth even cutoff: chi(t) = 1 for |t| <= 1/3, 0 for |t| >= 2/3, glued by
// the standard exp(-1/t) bump. Value and first three derivatives.
void chi_derivs(double t, int order, double* out);

}  // namespace umbilic
