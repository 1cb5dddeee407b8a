#pragma once

// Shared helpers for the unit tests: tolerance comparisons and the
// independent oracles (finite differences, brute-force plane sampling).

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "warpchen/invariants.hpp"

namespace testsupport {

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Central differences of a scalar function of several variables.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double fd_second(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                        std::size_t i, std::size_t j, double h) {
  auto at = [&](double di, double dj) {
    auto y = x;
    y[i] += di;
    y[j] += dj;
    return f(y);
  };
  if (i == j) return (at(h, 0) - 2.0 * f(x) + at(-h, 0)) / (h * h);
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

// Sectional curvature through the bivector form K = p^T M p, with p the
// Pluecker coordinates of an orthonormal pair (a < b index pairs).
struct BivectorForm {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> M;  // pairs.size()^2

  explicit BivectorForm(const warpchen::CurvatureTensor& R, std::span<const int> idx) {
    n = static_cast<int>(idx.size());
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    const std::size_t P = pairs.size();
    M.assign(P * P, 0.0);
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < P; ++q) {
        const auto [a, b] = pairs[p];
        const auto [c, d] = pairs[q];
        M[p * P + q] = R(idx[a], idx[b], idx[c], idx[d]);
      }
  }

  double operator()(std::span<const double> x, std::span<const double> y) const {
    const std::size_t P = pairs.size();
    std::vector<double> pl(P);
    for (std::size_t p = 0; p < P; ++p) pl[p] = x[pairs[p].first] * y[pairs[p].second] - x[pairs[p].second] * y[pairs[p].first];
    double k = 0.0;
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < P; ++q) k += pl[p] * M[p * P + q] * pl[q];
    double xx = 0, yy = 0, xy = 0;
    for (int i = 0; i < n; ++i) {
      xx += x[i] * x[i];
      yy += y[i] * y[i];
      xy += x[i] * y[i];
    }
    return k / (xx * yy - xy * xy);
  }
};

// Replaces (x, y) by an orthonormal pair spanning the same plane.
inline void orthonormalize(std::vector<double>& x, std::vector<double>& y) {
  double xx = 0.0;
  for (double v : x) xx += v * v;
  for (auto& v : x) v /= std::sqrt(xx);
  double xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) xy += x[i] * y[i];
  for (std::size_t i = 0; i < x.size(); ++i) y[i] -= xy * x[i];
  double yy = 0.0;
  for (double v : y) yy += v * v;
  for (auto& v : y) v /= std::sqrt(yy);
}

// Minimum of K over `samples` random planes.
inline double brute_force_inf_k(const warpchen::CurvatureTensor& R, std::span<const int> idx, long samples,
                                std::uint64_t seed, std::vector<double>* best_x = nullptr,
                                std::vector<double>* best_y = nullptr) {
  const BivectorForm form(R, idx);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(idx.size()), y(idx.size());
  double best = INFINITY;
  for (long s = 0; s < samples; ++s) {
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    orthonormalize(x, y);
    const double k = form(x, y);
    if (k < best) {
      best = k;
      if (best_x) *best_x = x;
      if (best_y) *best_y = y;
    }
  }
  return best;
}

// Random-perturbation descent from (x, y) with a shrinking step.
inline double polish_inf_k(const warpchen::CurvatureTensor& R, std::span<const int> idx, std::vector<double> x,
                           std::vector<double> y, std::uint64_t seed, int rounds = 40, int tries = 2000) {
  const BivectorForm form(R, idx);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double best = form(x, y);
  double step = 0.1;
  for (int r = 0; r < rounds; ++r, step *= 0.7) {
    for (int t = 0; t < tries; ++t) {
      auto px = x, py = y;
      for (auto& v : px) v += step * nd(rng);
      for (auto& v : py) v += step * nd(rng);
      orthonormalize(px, py);
      const double k = form(px, py);
      if (k < best) {
        best = k;
        x = px;
        y = py;
      }
    }
  }
  return best;
}

// Random algebraic curvature tensor: a sum of Gauss-type terms with mixed
// signs plus a constant-curvature part.
inline warpchen::CurvatureTensor random_curvature(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  warpchen::CurvatureTensor R(n, n);
  const double c = nd(rng);
  const int terms = 3;
  std::vector<std::vector<double>> A(terms, std::vector<double>(n * n));
  std::vector<double> sign(terms);
  for (int t = 0; t < terms; ++t) {
    sign[t] = (t % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A[t][i * n + j] = A[t][j * n + i] = nd(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = c * ((i == k) * (j == l) - (i == l) * (j == k));
          for (int t = 0; t < terms; ++t)
            v += sign[t] * (A[t][i * n + k] * A[t][j * n + l] - A[t][i * n + l] * A[t][j * n + k]);
          R.at(i, j, k, l) = v;
        }
  return R;
}

}  // namespace testsupport
