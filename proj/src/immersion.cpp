#include "warpchen/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace warpchen {

namespace {

constexpr int kValidationPoints = 16;
constexpr double kBlockTol = 1e-8;
constexpr double kMinEigen = 1e-10;
constexpr double kMeanCurvatureFloor = 1e-10;

std::string format_point(const std::vector<std::string>& names, std::span<const double> u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", names[i].c_str(), u[i]);
    s += buf;
  }
  return s + ")";
}

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double min_eigenvalue(const Matrix& g) { return sym_eigen(g).values.front(); }

}  // namespace

const char* ambient_kind_name(AmbientKind kind) {
  switch (kind) {
    case AmbientKind::Euclidean: return "euclidean";
    case AmbientKind::Sphere: return "sphere";
    case AmbientKind::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

AmbientKind parse_ambient_kind(const std::string& name) {
  if (name == "euclidean") return AmbientKind::Euclidean;
  if (name == "sphere") return AmbientKind::Sphere;
  if (name == "hyperbolic") return AmbientKind::Hyperbolic;
  throw ValidationError("unknown ambient kind '" + name + "' (expected euclidean, sphere or hyperbolic)");
}

double SpaceForm::inner(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += signature(static_cast<int>(i)) * a[i] * b[i];
  return s;
}

void SpaceForm::validate() const {
  if (m < 1) throw ValidationError("ambient dimension must be positive");
  switch (kind) {
    case AmbientKind::Euclidean:
      if (c != 0.0) throw ValidationError("euclidean ambient requires c = 0");
      break;
    case AmbientKind::Sphere:
      if (!(c > 0.0)) throw ValidationError("sphere ambient requires c > 0");
      break;
    case AmbientKind::Hyperbolic:
      if (!(c < 0.0)) throw ValidationError("hyperbolic ambient requires c < 0");
      break;
  }
}

Matrix LocalJet::metric_values() const {
  const int dim = n();
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = this->g(i, j).value();
  return g;
}

Matrix ShapeCoefficients::slice(int r) const {
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(r, i, j);
  return m;
}

WarpedChart WarpedChart::build(const ChartSpec& spec) {
  WarpedChart chart;
  chart.spec_ = spec;
  const int n1 = chart.n1(), n2 = chart.n2(), n = chart.n();
  if (n1 < 1 || n2 < 1) throw ValidationError("base and fiber need at least one coordinate each");
  if (n > kMaxVars) throw ValidationError("chart dimension " + std::to_string(n) + " exceeds " + std::to_string(kMaxVars));

  chart.coords_ = spec.base_coords;
  chart.coords_.insert(chart.coords_.end(), spec.fiber_coords.begin(), spec.fiber_coords.end());
  std::set<std::string> names(chart.coords_.begin(), chart.coords_.end());
  if (static_cast<int>(names.size()) != n) throw ValidationError("coordinate names must be distinct");

  spec.ambient.validate();
  if (spec.ambient.m < n)
    throw ValidationError("ambient dimension m = " + std::to_string(spec.ambient.m) + " is below n = " +
                          std::to_string(n));
  if (static_cast<int>(spec.components.size()) != spec.ambient.model_dim())
    throw ValidationError("expected " + std::to_string(spec.ambient.model_dim()) + " components for a " +
                          ambient_kind_name(spec.ambient.kind) + " ambient of dimension " +
                          std::to_string(spec.ambient.m) + ", got " + std::to_string(spec.components.size()));
  if (static_cast<int>(spec.domain.size()) != n) throw ValidationError("domain box needs one interval per coordinate");
  for (int i = 0; i < n; ++i) {
    const auto& iv = spec.domain[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
      throw ValidationError("domain interval for '" + chart.coords_[i] + "' must be finite with lo < hi");
  }

  chart.warp_ = parse(spec.warp);
  for (const auto& v : chart.warp_.variables())
    if (std::find(spec.base_coords.begin(), spec.base_coords.end(), v) == spec.base_coords.end())
      throw ValidationError("warping function depends on '" + v + "', which is not a base coordinate");
  for (const auto& src : spec.components) {
    Expr e = parse(src);
    for (const auto& v : e.variables())
      if (!names.count(v)) throw ValidationError("component '" + src + "' uses undeclared coordinate '" + v + "'");
    chart.components_.push_back(std::move(e));
  }

  const SpaceForm& amb = spec.ambient;
  for (const auto& u : quasi_random_points(spec.domain, kValidationPoints, 0.0)) {
    const std::string where = format_point(chart.coords_, u);
    LocalJet jet;
    try {
      jet = chart.jet(u);
    } catch (const Error& e) {
      throw ValidationError(std::string("evaluation failed: ") + e.what() + " at witness " + where);
    }
    const double f = jet.warp.value();
    if (!(f > 0.0)) throw ValidationError("warping function is not positive (f = " + std::to_string(f) + ") at witness " + where);

    const Matrix g = jet.metric_values();
    if (!(min_eigenvalue(g) > kMinEigen)) throw ValidationError("induced metric is degenerate at witness " + where);

    double scale = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        scale = std::max(scale, std::abs(jet.g(i, j).value()));
        for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(jet.g(i, j).grad(k)));
      }
    const double tol = kBlockTol * scale;
    for (int a = 0; a < n1; ++a)
      for (int A = n1; A < n; ++A)
        if (std::abs(jet.g(a, A).value()) > tol)
          throw ValidationError("block mismatch: metric has a mixed base/fiber component at witness " + where);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b)
        for (int A = n1; A < n; ++A)
          if (std::abs(jet.g(a, b).grad(A)) > tol)
            throw ValidationError("block mismatch: base metric depends on fiber coordinate '" + chart.coords_[A] +
                                  "' at witness " + where);
    // g2 = g_AB / f^2 must not move with the base: d_a g_AB = 2 g_AB d_a f / f.
    for (int A = n1; A < n; ++A)
      for (int B = n1; B < n; ++B)
        for (int a = 0; a < n1; ++a) {
          const double lhs = jet.g(A, B).grad(a);
          const double rhs = 2.0 * jet.g(A, B).value() * jet.warp.grad(a) / f;
          if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs)))
            throw ValidationError("block mismatch: fiber block is not f^2 * g2 (d/d" + chart.coords_[a] +
                                  " of g/f^2 is nonzero) at witness " + where);
        }
    if (amb.kind != AmbientKind::Euclidean) {
      const double r2 = amb.inner(jet.phi, jet.phi);
      if (std::abs(amb.c * r2 - 1.0) > 1e-8)
        throw ValidationError("image point is off the model space form (c<x,x> = " + std::to_string(amb.c * r2) +
                              ") at witness " + where);
    }
  }
  return chart;
}

void WarpedChart::check_in_domain(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != n())
    throw OutOfDomain("point has " + std::to_string(u.size()) + " coordinates, chart has " + std::to_string(n()));
  for (int i = 0; i < n(); ++i) {
    const auto& iv = spec_.domain[i];
    if (!(u[i] > iv.lo && u[i] < iv.hi))
      throw OutOfDomain("coordinate '" + coords_[i] + "' = " + std::to_string(u[i]) + " is outside the open interval (" +
                        std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + ")");
  }
}

LocalJet WarpedChart::jet(std::span<const double> u) const {
  check_in_domain(u);
  const int dim = n();
  const int model = spec_.ambient.model_dim();
  LocalJet jet;
  jet.u.assign(u.begin(), u.end());
  jet.phi.assign(model, 0.0);
  jet.dphi = Matrix(model, dim);
  jet.d2phi.assign(model, Matrix(dim, dim));

  // first[alpha][k] = d_k phi^alpha carried with its own gradient and Hessian.
  std::vector<std::vector<HyperDual>> first(model, std::vector<HyperDual>(dim));
  for (int k = 0; k < dim; ++k) {
    Bindings<Dual<HyperDual>> env;
    for (int j = 0; j < dim; ++j)
      env.emplace(coords_[j], Dual<HyperDual>(HyperDual::variable(u[j], j, dim), HyperDual(j == k ? 1.0 : 0.0)));
    for (int alpha = 0; alpha < model; ++alpha) {
      const Dual<HyperDual> r = eval(components_[alpha], env);
      if (k == 0) {
        jet.phi[alpha] = r.v.value();
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) jet.d2phi[alpha](i, j) = r.v.hess(i, j);
      }
      jet.dphi(alpha, k) = r.d.value();
      first[alpha][k] = r.d;
    }
  }

  jet.metric.assign(static_cast<std::size_t>(dim) * dim, HyperDual());
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      HyperDual gij;
      for (int alpha = 0; alpha < model; ++alpha) {
        const HyperDual term = first[alpha][i] * first[alpha][j];
        if (spec_.ambient.signature(alpha) < 0) {
          gij -= term;
        } else {
          gij += term;
        }
      }
      jet.metric[static_cast<std::size_t>(i) * dim + j] = gij;
      jet.metric[static_cast<std::size_t>(j) * dim + i] = gij;
    }

  Bindings<HyperDual> wenv;
  for (int j = 0; j < dim; ++j) wenv.emplace(coords_[j], HyperDual::variable(u[j], j, dim));
  jet.warp = eval(warp_, wenv);
  return jet;
}

double WarpedChart::warp_value(std::span<const double> u) const {
  check_in_domain(u);
  Bindings<double> env;
  for (int j = 0; j < n(); ++j) env.emplace(coords_[j], u[j]);
  return eval(warp_, env);
}

Matrix first_fundamental_form(const WarpedChart& chart, std::span<const double> u) {
  Matrix g = chart.jet(u).metric_values();
  if (!(min_eigenvalue(g) > kMinEigen)) throw DegenerateMetric("induced metric is degenerate");
  return g;
}

PointData second_fundamental_form(const WarpedChart& chart, std::span<const double> u) {
  const LocalJet jet = chart.jet(u);
  const SpaceForm& amb = chart.ambient();
  const int n = chart.n();
  const int model = amb.model_dim();
  const int q = amb.m - n;
  if (q < 1) throw NormalRankError("no normal directions: m = n = " + std::to_string(n));

  PointData pd;
  pd.u = jet.u;
  pd.n1 = chart.n1();
  pd.n2 = chart.n2();
  pd.g = jet.metric_values();
  if (!(min_eigenvalue(pd.g) > kMinEigen)) throw DegenerateMetric("induced metric is degenerate");
  pd.tangent_frame = gram_schmidt(Matrix::identity(n), pd.g);
  pd.tangent_ambient = jet.dphi * pd.tangent_frame.vectors;
  pd.position = jet.phi;

  // Everything already spanned: tangent frame plus, for curved ambients, the
  // position vector (the model's normal). Stored with <q, q>.
  std::vector<std::pair<std::vector<double>, double>> spanned;
  for (int a = 0; a < n; ++a) {
    auto v = pd.tangent_ambient.col(a);
    spanned.emplace_back(v, amb.inner(v, v));
  }
  if (amb.kind != AmbientKind::Euclidean) spanned.emplace_back(jet.phi, amb.inner(jet.phi, jet.phi));

  auto residual = [&](std::vector<double> v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& [w, ww] : spanned) {
        const double coef = amb.inner(v, w) / ww;
        for (int i = 0; i < model; ++i) v[i] -= coef * w[i];
      }
    return v;
  };

  Matrix normals(model, q);
  std::vector<bool> used(model, false);
  for (int r = 0; r < q; ++r) {
    int best = -1;
    double best_norm = -1.0;
    std::vector<double> best_vec;
    for (int alpha = 0; alpha < model; ++alpha) {
      if (used[alpha]) continue;
      std::vector<double> e(model, 0.0);
      e[alpha] = 1.0;
      auto v = residual(std::move(e));
      const double nv = std::sqrt(std::max(0.0, amb.inner(v, v)));
      if (nv > best_norm) {
        best_norm = nv;
        best = alpha;
        best_vec = std::move(v);
      }
    }
    if (best < 0 || best_norm < 1e-6) throw NormalRankError("normal complement has dimension " + std::to_string(r) + ", expected " + std::to_string(q));
    used[best] = true;
    for (double& x : best_vec) x /= best_norm;
    // Reorthogonalize once more against the accepted set before storing.
    best_vec = residual(best_vec);
    const double again = std::sqrt(amb.inner(best_vec, best_vec));
    for (double& x : best_vec) x /= again;
    normals.set_col(r, best_vec);
    spanned.emplace_back(best_vec, 1.0);
  }
  for (int alpha = 0; alpha < model; ++alpha) {
    if (used[alpha]) continue;
    std::vector<double> e(model, 0.0);
    e[alpha] = 1.0;
    auto v = residual(std::move(e));
    if (std::sqrt(std::max(0.0, amb.inner(v, v))) > 1e-6)
      throw NormalRankError("normal complement is larger than m - n = " + std::to_string(q));
  }

  // Coordinate-basis normal components N^r_ij = <d_i d_j phi, nu_r>.
  const Matrix& F = pd.tangent_frame.vectors;
  ShapeCoefficients h(q, n);
  for (int r = 0; r < q; ++r) {
    Matrix N(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int alpha = 0; alpha < model; ++alpha) s += amb.signature(alpha) * jet.d2phi[alpha](i, j) * normals(alpha, r);
        N(i, j) = N(j, i) = s;
      }
    const Matrix NF = N * F;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += F(i, a) * NF(i, b);
        h.set(r, a, b, s);
      }
  }

  std::vector<double> H(q, 0.0);
  for (int r = 0; r < q; ++r) {
    for (int a = 0; a < n; ++a) H[r] += h(r, a, a);
    H[r] /= n;
  }
  const double normH = std::sqrt(dot(H, H));
  if (normH > kMeanCurvatureFloor) {
    // Householder reflection Q with Q e_1 = H/|H|, applied in coefficient space.
    std::vector<double> v(q);
    for (int r = 0; r < q; ++r) v[r] = H[r] / normH - (r == 0 ? 1.0 : 0.0);
    const double vv = dot(v, v);
    if (vv > 1e-30) {
      Matrix Q = Matrix::identity(q);
      for (int r = 0; r < q; ++r)
        for (int s = 0; s < q; ++s) Q(r, s) -= 2.0 * v[r] * v[s] / vv;
      normals = normals * Q;
      ShapeCoefficients rotated(q, n);
      for (int s = 0; s < q; ++s)
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b) {
            double x = 0.0;
            for (int r = 0; r < q; ++r) x += Q(r, s) * h(r, a, b);
            rotated.set(s, a, b, x);
          }
      h = std::move(rotated);
    }
  }

  pd.H.assign(q, 0.0);
  pd.meanH2 = 0.0;
  pd.h2 = 0.0;
  for (int r = 0; r < q; ++r) {
    double tr = 0.0;
    for (int a = 0; a < n; ++a) tr += h(r, a, a);
    pd.H[r] = tr / n;
    pd.meanH2 += pd.H[r] * pd.H[r];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) pd.h2 += h(r, a, b) * h(r, a, b);
  }
  Matrix eta(model, model);
  for (int alpha = 0; alpha < model; ++alpha) eta(alpha, alpha) = amb.signature(alpha);
  pd.normal_frame = Frame{std::move(normals), std::move(eta)};
  pd.h = std::move(h);
  return pd;
}

std::vector<std::vector<double>> quasi_random_points(std::span<const Interval> box, int count, double margin, int skip) {
  const int dim = static_cast<int>(box.size());
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::vector<double> u(dim);
    for (int i = 0; i < dim; ++i) {
      const double t = halton(k + 1 + skip, kPrimes[i % std::size(kPrimes)]);
      const double w = box[i].hi - box[i].lo;
      u[i] = box[i].lo + w * (margin + (1.0 - 2.0 * margin) * t);
    }
    pts.push_back(std::move(u));
  }
  return pts;
}

}  // namespace warpchen
