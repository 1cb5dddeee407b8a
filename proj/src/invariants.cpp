#include "warpchen/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace warpchen {

namespace {

// T'(a,b,c,d) = sum T(i,j,k,l) Q(i,a) Q(j,b) Q(k,c) Q(l,d), one index at a time.
CurvatureTensor transform(const CurvatureTensor& R, const Matrix& Q, int n1) {
  const int n = R.dim();
  const int k = Q.cols();
  auto idx = [](int a, int b, int c, int d, int s1, int s2, int s3) {
    return ((static_cast<std::size_t>(a) * s1 + b) * s2 + c) * s3 + d;
  };
  // Stage sizes shrink the leading dimensions from n to k one at a time.
  std::vector<double> t1(static_cast<std::size_t>(k) * n * n * n, 0.0);
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < n; ++i) {
      const double q = Q(i, a);
      if (q == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) t1[idx(a, j, l, m, n, n, n)] += q * R(i, j, l, m);
    }
  std::vector<double> t2(static_cast<std::size_t>(k) * k * n * n, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int j = 0; j < n; ++j) {
        const double q = Q(j, b);
        if (q == 0.0) continue;
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) t2[idx(a, b, l, m, k, n, n)] += q * t1[idx(a, j, l, m, n, n, n)];
      }
  std::vector<double> t3(static_cast<std::size_t>(k) * k * k * n, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int l = 0; l < n; ++l) {
          const double q = Q(l, c);
          if (q == 0.0) continue;
          for (int m = 0; m < n; ++m) t3[idx(a, b, c, m, k, k, n)] += q * t2[idx(a, b, l, m, k, n, n)];
        }
  CurvatureTensor out(k, n1);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += Q(m, d) * t3[idx(a, b, c, m, k, k, n)];
          out.at(a, b, c, d) = s;
        }
  return out;
}

double plane_value(const CurvatureTensor& R, const std::vector<double>& x, const std::vector<double>& y) {
  const int n = R.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double xy = x[a] * y[b];
      if (xy == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += R(a, b, c, d) * xy * x[c] * y[d];
    }
  return s;
}

// Normalizes x, then y against x. Returns false on a degenerate pair.
bool orthonormalize_pair(std::vector<double>& x, std::vector<double>& y) {
  const double nx = std::sqrt(dot(x, x));
  if (!(nx > 1e-12)) return false;
  for (double& v : x) v /= nx;
  for (int pass = 0; pass < 2; ++pass) {
    const double p = dot(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= p * x[i];
  }
  const double ny = std::sqrt(dot(y, y));
  if (!(ny > 1e-12)) return false;
  for (double& v : y) v /= ny;
  return true;
}

struct Plane {
  double k;
  std::vector<double> x, y;
};

// Projected gradient descent on (x, y) with retraction by re-orthonormalization;
// the step is halved whenever a trial does not decrease K.
Plane refine_plane(const CurvatureTensor& R, Plane p, int steps) {
  const int n = R.dim();
  double frob = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) frob += R(a, b, c, d) * R(a, b, c, d);
  if (frob == 0.0) return p;
  double step = 0.5 / std::sqrt(frob);
  std::vector<double> gx(n), gy(n);
  for (int it = 0; it < steps; ++it) {
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gy.begin(), gy.end(), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double r = R(a, b, c, d);
            if (r == 0.0) continue;
            gx[a] += 2.0 * r * p.y[b] * p.x[c] * p.y[d];
            gy[b] += 2.0 * r * p.x[a] * p.x[c] * p.y[d];
          }
    for (auto* g : {&gx, &gy}) {
      const double px = dot(*g, p.x), py = dot(*g, p.y);
      for (int i = 0; i < n; ++i) (*g)[i] -= px * p.x[i] + py * p.y[i];
    }
    if (dot(gx, gx) + dot(gy, gy) < 1e-30) break;
    Plane trial{0.0, p.x, p.y};
    for (int i = 0; i < n; ++i) {
      trial.x[i] -= step * gx[i];
      trial.y[i] -= step * gy[i];
    }
    if (orthonormalize_pair(trial.x, trial.y)) {
      trial.k = plane_value(R, trial.x, trial.y);
      if (trial.k < p.k) {
        p = std::move(trial);
        continue;
      }
    }
    step *= 0.5;
  }
  return p;
}

std::vector<double> embed(const std::vector<double>& local, std::span<const int> idx, int n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = local[i];
  return out;
}

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double CurvatureTensor::symmetry_defect() const {
  double worst = 0.0;
  const auto& R = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          const double r = R(i, j, k, l);
          worst = std::max({worst, std::abs(r + R(j, i, k, l)), std::abs(r + R(i, j, l, k)),
                            std::abs(r - R(k, l, i, j)), std::abs(r + R(i, k, l, j) + R(i, l, j, k))});
        }
  return worst;
}

double CurvatureTensor::max_abs_difference(const CurvatureTensor& other) const {
  if (other.n_ != n_) throw ShapeError("curvature tensors of different dimension");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  return worst;
}

CurvatureTensor CurvatureTensor::restrict_to(std::span<const int> indices) const {
  const int k = static_cast<int>(indices.size());
  CurvatureTensor out(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) out.at(a, b, c, d) = (*this)(indices[a], indices[b], indices[c], indices[d]);
  return out;
}

std::vector<int> SubspaceSel::resolve(int n, int n1) const {
  std::vector<int> idx;
  switch (kind) {
    case Kind::All:
      for (int i = 0; i < n; ++i) idx.push_back(i);
      break;
    case Kind::Base:
      for (int i = 0; i < n1; ++i) idx.push_back(i);
      break;
    case Kind::Fiber:
      for (int i = n1; i < n; ++i) idx.push_back(i);
      break;
    case Kind::Custom: {
      idx = custom;
      std::vector<int> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ShapeError("subspace indices must be distinct");
      for (int i : idx)
        if (i < 0 || i >= n) throw ShapeError("subspace index out of range");
      break;
    }
  }
  return idx;
}

CurvatureTensor curvature_from_jet(const LocalJet& jet, const Matrix& frame, int n1) {
  const int n = jet.n();
  const Matrix g = jet.metric_values();
  const Matrix ginv = inverse_spd(g);
  auto dg = [&jet](int k, int i, int j) { return jet.g(i, j).grad(k); };
  auto ddg = [&jet](int k, int l, int i, int j) { return jet.g(i, j).hess(k, l); };

  // gamma[c][a][b] = Gamma^c_ab
  std::vector<double> gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  auto G = [&gamma, n](int c, int a, int b) -> double& { return gamma[(static_cast<std::size_t>(c) * n + a) * n + b]; };
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += ginv(c, d) * (dg(a, b, d) + dg(b, a, d) - dg(d, a, b));
        G(c, a, b) = 0.5 * s;
      }

  CurvatureTensor coord(n, n1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double r = 0.5 * (ddg(b, c, a, d) + ddg(a, d, b, c) - ddg(b, d, a, c) - ddg(a, c, b, d));
          for (int p = 0; p < n; ++p)
            for (int s = 0; s < n; ++s) r += g(p, s) * (G(p, b, c) * G(s, a, d) - G(p, b, d) * G(s, a, c));
          coord.at(a, b, c, d) = r;
        }
  return transform(coord, frame, n1);
}

CurvatureTensor curvature_intrinsic(const WarpedChart& chart, std::span<const double> u) {
  const LocalJet jet = chart.jet(u);
  const Matrix g = jet.metric_values();
  if (!(sym_eigen(g).values.front() > 1e-10)) throw DegenerateMetric("induced metric is degenerate");
  const Frame frame = gram_schmidt(Matrix::identity(chart.n()), g);
  return curvature_from_jet(jet, frame.vectors, chart.n1());
}

CurvatureTensor curvature_gauss(const PointData& point, const SpaceForm& ambient) {
  const int n = point.n();
  const int q = point.codim();
  const auto& h = point.h;
  const double c = ambient.c;
  CurvatureTensor R(n, point.n1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = c * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
          for (int r = 0; r < q; ++r) v += h(r, i, k) * h(r, j, l) - h(r, i, l) * h(r, j, k);
          R.at(i, j, k, l) = v;
        }
  return R;
}

double sectional(const CurvatureTensor& R, std::span<const double> x, std::span<const double> y) {
  const int n = R.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) throw ShapeError("vector dimension mismatch");
  const double gram = dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y);
  if (gram < 1e-12) throw DegeneratePlane("vectors do not span a plane");
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += R(a, b, c, d) * x[a] * y[b] * x[c] * y[d];
  return s / gram;
}

double scalar_tau(const CurvatureTensor& R, const SubspaceSel& sel) {
  const auto idx = sel.resolve(R.dim(), R.n1());
  CompensatedSum sum;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) sum.add(R(idx[a], idx[b], idx[a], idx[b]));
  return sum.value();
}

DeltaResult delta_invariant(const CurvatureTensor& R, const SubspaceSel& sel, const PlaneSearchOptions& opts) {
  const auto idx = sel.resolve(R.dim(), R.n1());
  const int k = static_cast<int>(idx.size());
  if (k < 2) throw SubspaceTooSmall("a 2-plane needs a subspace of dimension at least 2");
  const CurvatureTensor sub = R.restrict_to(idx);

  std::vector<Plane> candidates;
  double coord_min = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      Plane p{sub(a, b, a, b), std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
      p.x[a] = 1.0;
      p.y[b] = 1.0;
      coord_min = std::min(coord_min, p.k);
      candidates.push_back(std::move(p));
    }
  if (k > 2) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < opts.samples; ++s) {
      Plane p{0.0, std::vector<double>(k), std::vector<double>(k)};
      do {
        for (int i = 0; i < k; ++i) p.x[i] = gauss(rng);
        for (int i = 0; i < k; ++i) p.y[i] = gauss(rng);
      } while (!orthonormalize_pair(p.x, p.y));
      p.k = plane_value(sub, p.x, p.y);
      candidates.push_back(std::move(p));
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Plane& a, const Plane& b) { return a.k < b.k; });
    const int starts = std::min<int>(opts.refine_starts, static_cast<int>(candidates.size()));
    for (int s = 0; s < starts; ++s) candidates.push_back(refine_plane(sub, candidates[s], opts.refine_steps));
  }
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const Plane& a, const Plane& b) { return a.k < b.k; });

  DeltaResult out;
  out.tau = scalar_tau(R, sel);
  out.inf_k = best->k;
  out.delta = out.tau - out.inf_k;
  out.coordinate_min = coord_min;
  out.plane_x = embed(best->x, idx, R.dim());
  out.plane_y = embed(best->y, idx, R.dim());
  out.sampled = k > 2;
  return out;
}

ThetaResult theta_k(const CurvatureTensor& R, int k, std::uint64_t seed, int samples) {
  const int n = R.dim();
  if (k < 2 || k > n) throw BadK("k must satisfy 2 <= k <= n = " + std::to_string(n));

  std::vector<Matrix> planes;
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  combinations(n, k, 0, cur, subsets);
  for (const auto& s : subsets) {
    Matrix Q(n, k);
    for (int j = 0; j < k; ++j) Q(s[j], j) = 1.0;
    planes.push_back(std::move(Q));
  }
  if (k < n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Matrix I = Matrix::identity(n);
    for (int s = 0; s < samples; ++s) {
      Matrix A(n, k);
      for (;;) {
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < n; ++i) A(i, j) = gauss(rng);
        try {
          planes.push_back(gram_schmidt(A, I).vectors);
          break;
        } catch (const RankDeficient&) {
        }
      }
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& Q : planes) {
    const CurvatureTensor P = transform(R, Q, k);
    Matrix ric(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += P(a, j, b, j);
        ric(a, b) = ric(b, a) = s;
      }
    best = std::min(best, sym_eigen(ric).values.front());
  }
  return ThetaResult{best / (k - 1), k < n};
}

WarpLaplacian warp_laplacian(const LocalJet& jet, int n1, const CurvatureTensor& intrinsic) {
  const int n = jet.n();
  Matrix g1(n1, n1);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) g1(a, b) = jet.g(a, b).value();
  const Matrix g1inv = inverse_spd(g1);
  const HyperDual& f = jet.warp;

  // Delta f = -g^ab (d_a d_b f - Gamma^c_ab d_c f) on (N1, g1).
  CompensatedSum div;
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      double hess = f.hess(a, b);
      for (int c = 0; c < n1; ++c) {
        double gamma = 0.0;
        for (int d = 0; d < n1; ++d)
          gamma += g1inv(c, d) * (jet.g(b, d).grad(a) + jet.g(a, d).grad(b) - jet.g(a, b).grad(d));
        hess -= 0.5 * gamma * f.grad(c);
      }
      div.add(g1inv(a, b) * hess);
    }

  WarpLaplacian out;
  out.laplacian = -div.value();
  out.warp = f.value();
  out.lap_ratio = (n - n1) * out.laplacian / out.warp;
  CompensatedSum mixed;
  for (int a = 0; a < n1; ++a)
    for (int A = n1; A < n; ++A) mixed.add(intrinsic(a, A, a, A));
  out.mixed_sum = mixed.value();
  out.identity_residual = std::abs(out.mixed_sum - out.lap_ratio);
  return out;
}

WarpLaplacian warp_laplacian(const WarpedChart& chart, std::span<const double> u) {
  const LocalJet jet = chart.jet(u);
  if (!(jet.warp.value() > 0.0)) throw DomainError("warping function must be positive");
  const Matrix g = jet.metric_values();
  if (!(sym_eigen(g).values.front() > 1e-10)) throw DegenerateMetric("induced metric is degenerate");
  const Frame frame = gram_schmidt(Matrix::identity(chart.n()), g);
  return warp_laplacian(jet, chart.n1(), curvature_from_jet(jet, frame.vectors, chart.n1()));
}

double trace_identity_residual(const CurvatureTensor& R, const PointData& point, const SpaceForm& ambient) {
  const int n = point.n();
  const double tau = scalar_tau(R, SubspaceSel::all());
  const double tau_ambient = ambient.c * n * (n - 1) / 2.0;
  return std::abs(2.0 * tau - 2.0 * tau_ambient - n * n * point.meanH2 + point.h2);
}

}  // namespace warpchen
