#pragma once

// Forward-mode automatic differentiation carriers.
//
// HyperDual holds a value together with its full gradient and Hessian with
// respect to up to kMaxVars active coordinates. The Hessian is stored as a
// packed upper triangle, so it is symmetric by construction.
//
// Dual<T> is a first-order dual number over an arbitrary scalar. Nesting
// Dual<HyperDual> seeded along coordinate k yields d/du_k of a quantity as a
// HyperDual, i.e. derivatives up to third order. The metric jet needs that to
// get second derivatives of g_ij = <d_i phi, d_j phi>.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

namespace warpchen {

inline constexpr int kMaxVars = 8;

class HyperDual {
 public:
  HyperDual() = default;
  HyperDual(double value) : value_(value) {}  // NOLINT: constants promote implicitly

  // Independent variable number `index` out of `dim` active coordinates.
  static HyperDual variable(double value, int index, int dim) {
    assert(dim <= kMaxVars && index >= 0 && index < dim);
    HyperDual x(value);
    x.dim_ = dim;
    x.grad_[index] = 1.0;
    return x;
  }

  double value() const { return value_; }
  int dim() const { return dim_; }
  double grad(int i) const { return grad_[i]; }
  double hess(int i, int j) const { return hess_[packed(i, j)]; }

  // Applies a scalar function with derivatives f1 = f'(x), f2 = f''(x).
  HyperDual chain(double f0, double f1, double f2) const {
    HyperDual r(f0);
    r.dim_ = dim_;
    for (int i = 0; i < dim_; ++i) r.grad_[i] = f1 * grad_[i];
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) {
        const int p = packed(i, j);
        r.hess_[p] = f1 * hess_[p] + f2 * grad_[i] * grad_[j];
      }
    return r;
  }

  HyperDual& operator+=(const HyperDual& o) {
    value_ += o.value_;
    dim_ = std::max(dim_, o.dim_);
    for (int i = 0; i < o.dim_; ++i) grad_[i] += o.grad_[i];
    for (int p = 0; p < packed_size(o.dim_); ++p) hess_[p] += o.hess_[p];
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    value_ -= o.value_;
    dim_ = std::max(dim_, o.dim_);
    for (int i = 0; i < o.dim_; ++i) grad_[i] -= o.grad_[i];
    for (int p = 0; p < packed_size(o.dim_); ++p) hess_[p] -= o.hess_[p];
    return *this;
  }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator-(const HyperDual& a) { return a.chain(-a.value_, -1.0, 0.0); }

  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    HyperDual r(a.value_ * b.value_);
    r.dim_ = std::max(a.dim_, b.dim_);
    for (int i = 0; i < r.dim_; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (int i = 0; i < r.dim_; ++i)
      for (int j = i; j < r.dim_; ++j) {
        const int p = packed(i, j);
        r.hess_[p] = a.value_ * b.hess_[p] + b.value_ * a.hess_[p] + a.grad_[i] * b.grad_[j] +
                     a.grad_[j] * b.grad_[i];
      }
    return r;
  }

  // Caller guarantees b.value() != 0.
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    const double v = b.value_;
    return a * b.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

 private:
  static int packed(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
  }
  static int packed_size(int d) { return d * (d + 1) / 2; }

  double value_ = 0.0;
  int dim_ = 0;
  std::array<double, kMaxVars> grad_{};
  std::array<double, kMaxVars*(kMaxVars + 1) / 2> hess_{};
};

inline HyperDual sin(const HyperDual& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(s, c, -s);
}
inline HyperDual cos(const HyperDual& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(c, -s, -c);
}
inline HyperDual tan(const HyperDual& x) {
  const double t = std::tan(x.value());
  const double sec2 = 1.0 + t * t;
  return x.chain(t, sec2, 2.0 * t * sec2);
}
inline HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e, e);
}
inline HyperDual log(const HyperDual& x) {
  const double v = x.value();
  return x.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline HyperDual sinh(const HyperDual& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(s, c, s);
}
inline HyperDual cosh(const HyperDual& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(c, s, c);
}
inline HyperDual tanh(const HyperDual& x) {
  const double t = std::tanh(x.value());
  const double d = 1.0 - t * t;
  return x.chain(t, d, -2.0 * t * d);
}
inline HyperDual sqrt(const HyperDual& x) {
  const double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s, -0.25 / (s * s * s));
}
// Real exponent. Zero coefficients are kept exact so that x = 0 with small
// integer powers does not produce 0 * inf.
inline HyperDual pow(const HyperDual& x, double p) {
  if (p == 0.0) return HyperDual(1.0);
  if (p == 1.0) return x;
  const double v = x.value();
  const double d1 = p * std::pow(v, p - 1.0);
  const double d2 = (p == 2.0) ? 2.0 : p * (p - 1.0) * std::pow(v, p - 2.0);
  return x.chain(std::pow(v, p), d1, d2);
}

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.value(); }

template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(double c) : v(c), d(0.0) {}  // NOLINT
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
};

template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos, std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos, std::sin;
  return {cos(x.v), -(sin(x.v) * x.d)};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::tan;
  const T t = tan(x.v);
  return {t, (T(1.0) + t * t) * x.d};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.v);
  return {e, e * x.d};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sinh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {sinh(x.v), cosh(x.v) * x.d};
}
template <class T>
Dual<T> cosh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {cosh(x.v), sinh(x.v) * x.d};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  const T t = tanh(x.v);
  return {t, (T(1.0) - t * t) * x.d};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.v);
  return {s, x.d / (T(2.0) * s)};
}
template <class T>
Dual<T> pow(const Dual<T>& x, double p) {
  using std::pow;
  if (p == 0.0) return Dual<T>(1.0);
  return {pow(x.v, p), T(p) * pow(x.v, p - 1.0) * x.d};
}

}  // namespace warpchen
