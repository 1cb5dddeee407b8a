#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "warpchen/catalog.hpp"
#include "warpchen/invariants.hpp"

using namespace warpchen;
using std::numbers::pi;

namespace {

CurvatureTensor constant_curvature(int n, int n1, double c) {
  CurvatureTensor R(n, n1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R.at(i, j, k, l) = c * ((i == k) * (j == l) - (i == l) * (j == k));
  return R;
}

std::vector<double> unit(int n, int i) {
  std::vector<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

WarpedChart chart_of(const std::string& name) { return WarpedChart::build(catalog(name).chart); }

ChartSpec s2_times_line() {
  ChartSpec s;
  s.base_coords = {"t", "s"};
  s.fiber_coords = {"z"};
  s.warp = "1";
  s.components = {"sin(t)*cos(s)", "sin(t)*sin(s)", "cos(t)", "z"};
  s.ambient = {AmbientKind::Euclidean, 0.0, 4};
  s.domain = {{0.0, pi}, {0.0, 2 * pi}, {-1.0, 1.0}};
  return s;
}

}  // namespace

TEST_CASE("curvature_intrinsic examples") {
  const std::vector<double> u{0.9, 2.2};
  const CurvatureTensor flat = curvature_intrinsic(chart_of("clifford_s3"), u);
  CHECK(flat.max_abs_difference(CurvatureTensor(2, 1)) <= 1e-9);

  const CurvatureTensor s2 = curvature_intrinsic(chart_of("s2_revolution"), u);
  CHECK(s2(0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s2(0, 1, 1, 0) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> v{0.3, -0.6};
  const CurvatureTensor h2 = curvature_intrinsic(chart_of("hyperbolic_warp"), v);
  CHECK(h2(0, 1, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("curvature_gauss examples") {
  PointData p;
  p.n1 = 1;
  p.n2 = 2;
  p.h = ShapeCoefficients(1, 3);
  const CurvatureTensor zero = curvature_gauss(p, SpaceForm{AmbientKind::Euclidean, 0.0, 4});
  CHECK(zero.max_abs_difference(CurvatureTensor(3, 1)) == 0.0);

  const CurvatureTensor one = curvature_gauss(p, SpaceForm{AmbientKind::Sphere, 1.0, 4});
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(one(i, j, i, j) == 1.0);

  const auto chart = chart_of("s2_revolution");
  const std::vector<double> u{1.3, 0.2};
  const CurvatureTensor g = curvature_gauss(second_fundamental_form(chart, u), chart.ambient());
  CHECK(g(0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.max_abs_difference(curvature_intrinsic(chart, u)) <= 1e-9);
}

TEST_CASE("both curvature routes agree and have the algebraic symmetries") {
  const auto s = s2_times_line();
  std::vector<WarpedChart> charts{WarpedChart::build(s)};
  for (const auto& e : catalog_entries()) charts.push_back(WarpedChart::build(e.scene.chart));
  for (const auto& chart : charts) {
    for (const auto& u : quasi_random_points(chart.domain(), 16, 0.05)) {
      const CurvatureTensor Ri = curvature_intrinsic(chart, u);
      const PointData p = second_fundamental_form(chart, u);
      const CurvatureTensor Rg = curvature_gauss(p, chart.ambient());
      CHECK(Ri.symmetry_defect() <= 1e-8);
      CHECK(Rg.symmetry_defect() <= 1e-8);
      CHECK(Ri.max_abs_difference(Rg) <= 1e-7);
      CHECK(trace_identity_residual(Ri, p, chart.ambient()) <= 1e-8);
    }
  }
}

TEST_CASE("sectional curvature") {
  std::mt19937_64 rng(1);
  const CurvatureTensor R = testsupport::random_curvature(4, rng);
  CHECK(sectional(R, unit(4, 0), unit(4, 1)) == doctest::Approx(R(0, 1, 0, 1)).epsilon(1e-14));
  const std::vector<double> e12{1.0, 1.0, 0.0, 0.0};
  CHECK(sectional(R, unit(4, 0), e12) == doctest::Approx(R(0, 1, 0, 1)).epsilon(1e-12));
  const std::vector<double> twice{2.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(sectional(R, unit(4, 0), twice), DegeneratePlane);

  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(4), y(4), x2(4), y2(4);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    const double a = nd(rng), b = nd(rng), c = nd(rng), d = nd(rng);
    if (std::abs(a * d - b * c) < 0.1) continue;
    for (int i = 0; i < 4; ++i) {
      x2[i] = a * x[i] + b * y[i];
      y2[i] = c * x[i] + d * y[i];
    }
    const double k1 = sectional(R, x, y);
    CHECK(std::abs(k1 - sectional(R, x2, y2)) <= 1e-10 * std::max(1.0, std::abs(k1)));
    CHECK(std::abs(k1 - testsupport::BivectorForm(R, std::vector<int>{0, 1, 2, 3})(x, y)) <= 1e-10 * std::max(1.0, std::abs(k1)));
  }
}

TEST_CASE("scalar_tau") {
  CHECK(scalar_tau(constant_curvature(3, 1, 0.7), SubspaceSel::all()) == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(scalar_tau(constant_curvature(3, 1, 0.7), SubspaceSel::base()) == 0.0);
  CHECK(scalar_tau(constant_curvature(4, 2, 1.0), SubspaceSel::of({0, 3})) == 1.0);

  const std::vector<double> u{1.0, 1.2, 2.0};
  const CurvatureTensor R = curvature_intrinsic(chart_of("s3_warped"), u);
  CHECK(scalar_tau(R, SubspaceSel::fiber()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scalar_tau(R, SubspaceSel::all()) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("delta_invariant examples") {
  const DeltaResult d = delta_invariant(constant_curvature(3, 1, 0.5), SubspaceSel::all());
  CHECK(d.delta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.inf_k == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(2);
  const CurvatureTensor R2 = testsupport::random_curvature(2, rng);
  const DeltaResult d2 = delta_invariant(R2, SubspaceSel::all());
  CHECK(d2.delta == 0.0);
  CHECK_FALSE(d2.sampled);

  const auto chart = WarpedChart::build(s2_times_line());
  const std::vector<double> u{1.1, 0.5, 0.0};
  const CurvatureTensor R = curvature_intrinsic(chart, u);
  const DeltaResult dp = delta_invariant(R, SubspaceSel::all());
  const std::vector<int> all{0, 1, 2};
  const double brute = testsupport::brute_force_inf_k(R, all, 100000, 99);
  CHECK(dp.tau == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(dp.inf_k) <= 1e-9);
  CHECK(dp.delta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dp.inf_k <= brute + 1e-12);
  CHECK(sectional(R, dp.plane_x, dp.plane_y) == doctest::Approx(dp.inf_k).epsilon(1e-12));

  CHECK_THROWS_AS(delta_invariant(R, SubspaceSel::fiber()), SubspaceTooSmall);
}

TEST_CASE("plane search beats the coordinate planes and matches exact minima in dimension 3") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 3;
    const CurvatureTensor R = testsupport::random_curvature(n, rng);
    const DeltaResult d = delta_invariant(R, SubspaceSel::all());
    CHECK(d.inf_k <= d.coordinate_min);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    const double brute = testsupport::brute_force_inf_k(R, idx, 20000, trial);
    CHECK(d.inf_k <= brute + 1e-12);
    if (n == 3) {
      // Every 2-vector in dimension 3 is decomposable, so inf K is the
      // smallest eigenvalue of the curvature operator on bivectors.
      const testsupport::BivectorForm form(R, idx);
      Matrix M(3, 3);
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) M(p, q) = form.M[p * 3 + q];
      CHECK(d.inf_k == doctest::Approx(sym_eigen(M).values.front()).epsilon(1e-8));
    }
  }
}

TEST_CASE("plane search is reproducible for a fixed seed") {
  std::mt19937_64 rng(8);
  const CurvatureTensor R = testsupport::random_curvature(5, rng);
  const DeltaResult a = delta_invariant(R, SubspaceSel::all());
  const DeltaResult b = delta_invariant(R, SubspaceSel::all());
  CHECK(a.inf_k == b.inf_k);
  CHECK(a.plane_x == b.plane_x);
}

TEST_CASE("theta_k") {
  for (int k = 2; k <= 4; ++k) CHECK(theta_k(constant_curvature(4, 2, -0.3), k).value == doctest::Approx(-0.3).epsilon(1e-12));

  std::mt19937_64 rng(6);
  const CurvatureTensor R = testsupport::random_curvature(4, rng);
  Matrix ric(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 4; ++a) ric(i, j) += R(a, i, a, j);
  CHECK(theta_k(R, 4).value == doctest::Approx(sym_eigen(ric).values.front() / 3.0).epsilon(1e-10));
  CHECK(theta_k(R, 2).value <= delta_invariant(R, SubspaceSel::all()).coordinate_min + 1e-12);

  const std::vector<double> u{0.4, 1.9};
  CHECK(std::abs(theta_k(curvature_intrinsic(chart_of("flat_torus_r4"), u), 2).value) <= 1e-9);
  CHECK_THROWS_AS(theta_k(R, 1), BadK);
  CHECK_THROWS_AS(theta_k(R, 5), BadK);
}

TEST_CASE("warp Laplacian and the mixed curvature identity") {
  const std::vector<double> u2{1.0, 0.3};
  const WarpLaplacian cyl = warp_laplacian(chart_of("cylinder"), u2);
  CHECK(cyl.lap_ratio == 0.0);
  CHECK(cyl.identity_residual <= 1e-9);

  for (double t : {0.5, pi / 2, 2.4}) {
    const std::vector<double> u{t, 1.0, 3.0};
    const WarpLaplacian w = warp_laplacian(chart_of("s3_warped"), u);
    CHECK(w.laplacian == doctest::Approx(std::sin(t)).epsilon(1e-12));
    CHECK(w.lap_ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.mixed_sum == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.identity_residual <= 1e-8);
    // With div grad in place of its negative the identity misses by 4.
    CHECK(std::abs(w.mixed_sum + w.lap_ratio) == doctest::Approx(4.0).epsilon(1e-12));
  }

  const std::vector<double> v{-0.4, 0.8};
  const WarpLaplacian h = warp_laplacian(chart_of("hyperbolic_warp"), v);
  CHECK(h.lap_ratio == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(h.mixed_sum == doctest::Approx(-1.0).epsilon(1e-12));

  // Two-dimensional base with g1 = diag(G, 1), G = 1 + e^x / 4:
  // Delta f = -(f_xx / G - f_x G' / (2 G^2)).
  ChartSpec s;
  s.base_coords = {"x", "y"};
  s.fiber_coords = {"z"};
  s.warp = "exp(x/2)";
  s.components = {"x", "y", "exp(x/2)*cos(z)", "exp(x/2)*sin(z)"};
  s.ambient = {AmbientKind::Euclidean, 0.0, 4};
  s.domain = {{-1, 1}, {-1, 1}, {0, 2 * pi}};
  const auto chart = WarpedChart::build(s);
  const std::vector<double> u{0.3, -0.2, 1.0};
  const WarpLaplacian w = warp_laplacian(chart, u);
  const double G = 1.0 + std::exp(0.3) / 4, dG = std::exp(0.3) / 4;
  const double fx = std::exp(0.15) / 2, fxx = std::exp(0.15) / 4;
  CHECK(w.laplacian == doctest::Approx(-(fxx / G - fx * dG / (2 * G * G))).epsilon(1e-12));
  CHECK(w.identity_residual <= 1e-9);
}

TEST_CASE("homothety scales curvature by 1/lambda^2") {
  for (double lambda : {0.5, 2.0}) {
    const ChartSpec s = catalog("s3_warped").chart;
    ChartSpec r = s;
    const std::string l = std::to_string(lambda);
    for (auto& c : r.components) c = l + "*(" + c + ")";
    r.warp = l + "*(" + s.warp + ")";
    const std::vector<double> u{1.2, 0.9, 4.0};
    const auto a = WarpedChart::build(s);
    const auto b = WarpedChart::build(r);
    const CurvatureTensor Ra = curvature_intrinsic(a, u);
    const CurvatureTensor Rb = curvature_intrinsic(b, u);
    CHECK(scalar_tau(Rb, SubspaceSel::all()) == doctest::Approx(scalar_tau(Ra, SubspaceSel::all()) / (lambda * lambda)).epsilon(1e-12));
    CHECK(delta_invariant(Rb, SubspaceSel::fiber()).delta ==
          doctest::Approx(delta_invariant(Ra, SubspaceSel::fiber()).delta / (lambda * lambda)).epsilon(1e-12));
    CHECK(warp_laplacian(b, u).lap_ratio == doctest::Approx(warp_laplacian(a, u).lap_ratio / (lambda * lambda)).epsilon(1e-12));
  }
}
