#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "warpchen/catalog.hpp"
#include "warpchen/chen.hpp"

using namespace warpchen;
using std::numbers::pi;

namespace {

struct Evaluated {
  PointData point;
  CurvatureTensor R;
  WarpLaplacian lap;
};

Evaluated evaluate(const WarpedChart& chart, const std::vector<double>& u) {
  Evaluated e{second_fundamental_form(chart, u), {}, {}};
  e.R = curvature_intrinsic(chart, u);
  e.lap = warp_laplacian(chart, u);
  return e;
}

WarpedChart chart_of(const std::string& name) { return WarpedChart::build(catalog(name).chart); }

// Helicoid: minimal, with vanishing block traces but nonzero mixed part.
ChartSpec helicoid() {
  ChartSpec s;
  s.base_coords = {"r"};
  s.fiber_coords = {"t"};
  s.warp = "sqrt(1 + r^2)";
  s.components = {"r*cos(t)", "r*sin(t)", "t"};
  s.ambient = {AmbientKind::Euclidean, 0.0, 3};
  s.domain = {{-2, 2}, {0, 2 * pi}};
  return s;
}

// Independent form of the lemma gap: squared deviation of
// (a1 + a2, a3, ..., an) from its mean.
double gap_oracle(const std::vector<double>& a) {
  std::vector<double> b{a[0] + a[1]};
  b.insert(b.end(), a.begin() + 2, a.end());
  double mean = 0.0;
  for (double x : b) mean += x;
  mean /= static_cast<double>(b.size());
  double s = 0.0;
  for (double x : b) s += (x - mean) * (x - mean);
  return s;
}

ShapeCoefficients random_shape(int q, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ShapeCoefficients h(q, n);
  for (int r = 0; r < q; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) h.set(r, i, j, nd(rng));
  return h;
}

PointData synthetic_point(const ShapeCoefficients& h, int n1) {
  PointData p;
  p.n1 = n1;
  p.n2 = h.dim() - n1;
  p.h = h;
  const int n = h.dim();
  for (int r = 0; r < h.codim(); ++r) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
      tr += h(r, i, i);
      for (int j = 0; j < n; ++j) p.h2 += h(r, i, j) * h(r, i, j);
    }
    p.H.push_back(tr / n);
    p.meanH2 += (tr / n) * (tr / n);
  }
  return p;
}

}  // namespace

TEST_CASE("lemma examples") {
  LemmaInstance eq{{1.0, 2.0, 3.0, 3.0}, 0.0};
  eq.beta = lemma_beta(eq.alphas);
  const LemmaCheck a = check_lemma(eq);
  CHECK(a.holds);
  CHECK(a.equality);
  CHECK(a.condition_matches);

  LemmaInstance gen{{1.0, 2.0, 0.0, 5.0}, 0.0};
  gen.beta = lemma_beta(gen.alphas);
  const LemmaCheck b = check_lemma(gen);
  CHECK(b.holds);
  CHECK_FALSE(b.equality);
  CHECK_FALSE(b.condition_matches);
  CHECK(b.gap == doctest::Approx(gap_oracle(gen.alphas)).epsilon(1e-14));

  LemmaInstance two{{0.3, -1.2}, 0.0};
  two.beta = lemma_beta(two.alphas);
  const LemmaCheck c = check_lemma(two);
  CHECK(c.equality);
  CHECK(c.condition_matches);

  CHECK_THROWS_AS(check_lemma({{1.0, 2.0, 3.0}, 5.0}), HypothesisViolated);
  CHECK_THROWS_AS(check_lemma({{1.0}, 0.0}), ShapeError);
}

TEST_CASE("lemma on random instances") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> dim(2, 9);
  for (int trial = 0; trial < 20000; ++trial) {
    LemmaInstance inst;
    inst.alphas.resize(dim(rng));
    for (auto& a : inst.alphas) a = nd(rng);
    if (trial % 3 == 0)
      for (std::size_t k = 2; k < inst.alphas.size(); ++k) inst.alphas[k] = inst.alphas[0] + inst.alphas[1];
    inst.beta = lemma_beta(inst.alphas);
    const LemmaCheck chk = check_lemma(inst);
    CHECK(chk.holds);
    CHECK(chk.equality == chk.condition_matches);
    CHECK(std::abs(chk.gap - gap_oracle(inst.alphas)) <= 1e-12 * (1.0 + gap_oracle(inst.alphas)) * 10);
  }
}

TEST_CASE("rearrangement identities hold for arbitrary coefficients") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + trial % 6;
    const int q = 1 + trial % 4;
    const int n1 = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    const ShapeCoefficients h = random_shape(q, n, rng);
    const auto res = rearrangement_identities(h, n1);
    CHECK(res.res32 <= 1e-12 * std::max({1.0, std::abs(res.lhs32), std::abs(res.rhs32)}));
    CHECK(res.res33.has_value() == (n1 >= 3 && n1 < n));
    if (res.res33) CHECK(*res.res33 <= 1e-12 * std::max({1.0, std::abs(*res.lhs33), std::abs(*res.rhs33)}));
  }
  CHECK_THROWS_AS(rearrangement_identities(ShapeCoefficients(0, 4), 3), ShapeError);
  CHECK_THROWS_AS(rearrangement_identities(ShapeCoefficients(1, 2), 1), ShapeError);
}

TEST_CASE("rearrangement identity sides match their expansions") {
  // One normal slot, n = 3, expanded by hand.
  ShapeCoefficients h(1, 3);
  h.set(0, 0, 0, 1.0);
  h.set(0, 1, 1, 2.0);
  h.set(0, 2, 2, 3.0);
  h.set(0, 0, 1, 0.5);
  h.set(0, 0, 2, -1.0);
  h.set(0, 1, 2, 0.25);
  const auto res = rearrangement_identities(h, 2);
  // lhs = sum_{i != j} h_ij^2 / 2 - h_12^2 = (0.25 + 1 + 0.0625) - 0.25
  CHECK(res.lhs32 == doctest::Approx(1.0625).epsilon(1e-15));
  // rhs = (h_13^2 + h_23^2) = 1 + 0.0625
  CHECK(res.rhs32 == doctest::Approx(1.0625).epsilon(1e-15));
}

TEST_CASE("mixed second fundamental form of D-minimal immersions") {
  for (const char* name : {"great_sphere_s4", "plane_product"}) {
    const auto chart = chart_of(name);
    for (const auto& u : quasi_random_points(chart.domain(), 8, 0.05)) {
      const auto e = evaluate(chart, u);
      const auto id = dminimal_identity(e.point, e.lap.lap_ratio, chart.ambient());
      CHECK(std::abs(id.lhs) <= 1e-8);
      CHECK(std::abs(id.rhs) <= 1e-8);
      CHECK(id.residual <= 1e-8);
    }
  }

  const auto hel = WarpedChart::build(helicoid());
  for (double r : {-1.5, 0.0, 0.7}) {
    const std::vector<double> u{r, 1.0};
    const auto e = evaluate(hel, u);
    const auto id = dminimal_identity(e.point, e.lap.lap_ratio, hel.ambient());
    const double expected = 1.0 / ((1 + r * r) * (1 + r * r));
    CHECK(id.lhs == doctest::Approx(expected).epsilon(1e-12));
    CHECK(id.rhs == doctest::Approx(expected).epsilon(1e-12));
  }

  const auto cliff = chart_of("clifford_s3");
  const std::vector<double> u{1.0, 2.0};
  const auto e = evaluate(cliff, u);
  CHECK_THROWS_AS(dminimal_identity(e.point, e.lap.lap_ratio, cliff.ambient()), PreconditionError);
}

TEST_CASE("equality classifier") {
  const auto gs = chart_of("great_sphere_s4");
  const std::vector<double> u{1.0, 1.5, 2.0};
  const auto d = classify_equality(evaluate(gs, u).point, 1);
  CHECK(d.mixed_tg);
  CHECK(d.d1_minimal);
  CHECK(d.d2_minimal);
  CHECK(d.minimal);
  CHECK(d.pattern_ii.value_or(false));
  CHECK_FALSE(d.pattern_i.has_value());

  const auto cl = chart_of("clifford_s3");
  const std::vector<double> v{1.0, 2.0};
  const auto c = classify_equality(evaluate(cl, v).point, 1);
  CHECK(c.minimal);
  CHECK(c.mixed_tg);
  CHECK_FALSE(c.d1_minimal);
  CHECK_FALSE(c.d2_minimal);

  const auto hel = WarpedChart::build(helicoid());
  const std::vector<double> w{0.5, 1.0};
  const auto h = classify_equality(evaluate(hel, w).point, 1);
  CHECK(h.minimal);
  CHECK(h.d1_minimal);
  CHECK(h.d2_minimal);
  CHECK_FALSE(h.mixed_tg);
}

TEST_CASE("classifier recognizes the block forms") {
  // Base block of dimension 3 in the form [[m1, x], [x, m2]] + (m1 + m2),
  // fiber block arbitrary, mixed part zero; second slot trace-free corner.
  ShapeCoefficients h(2, 5);
  h.set(0, 0, 0, 0.4);
  h.set(0, 1, 1, 1.1);
  h.set(0, 0, 1, 0.3);
  h.set(0, 2, 2, 1.5);
  h.set(0, 3, 3, 2.0);
  h.set(0, 4, 4, -0.5);
  h.set(0, 3, 4, 0.7);
  h.set(1, 0, 0, 0.8);
  h.set(1, 1, 1, -0.8);
  h.set(1, 0, 1, 0.2);
  h.set(1, 3, 3, 0.9);
  auto d = classify_equality(synthetic_point(h, 3), 3);
  CHECK(d.pattern_i.value_or(false));
  REQUIRE(d.mu_i.has_value());
  CHECK(d.mu_i->mu == doctest::Approx(d.mu_i->mu1 + d.mu_i->mu2));
  CHECK_FALSE(d.pattern_ii.value_or(true));

  ShapeCoefficients broken = h;
  broken.set(0, 0, 3, 1e-3);
  d = classify_equality(synthetic_point(broken, 3), 3);
  CHECK_FALSE(d.pattern_i.value_or(true));
  CHECK_FALSE(d.mixed_tg);

  // Classical form: diag(m1, m2, m1 + m2, ...) and trace-free corners.
  ShapeCoefficients c(2, 4);
  c.set(0, 0, 0, 1.0);
  c.set(0, 1, 1, 2.0);
  c.set(0, 2, 2, 3.0);
  c.set(0, 3, 3, 3.0);
  c.set(1, 0, 1, 0.4);
  d = classify_equality(synthetic_point(c, 2), 2);
  CHECK(d.pattern_classical.value_or(false));
  c.set(0, 0, 1, 0.1);
  d = classify_equality(synthetic_point(c, 2), 2);
  CHECK_FALSE(d.pattern_classical.value_or(true));
}

TEST_CASE("block minimality implies minimality") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 5;
    const int n1 = 1 + trial % (n - 1);
    ShapeCoefficients h = random_shape(1 + trial % 3, n, rng);
    if (trial % 2 == 0) {
      // Remove the block traces.
      for (int r = 0; r < h.codim(); ++r) {
        double t1 = 0.0, t2 = 0.0;
        for (int a = 0; a < n1; ++a) t1 += h(r, a, a);
        for (int A = n1; A < n; ++A) t2 += h(r, A, A);
        h.set(r, 0, 0, h(r, 0, 0) - t1);
        h.set(r, n1, n1, h(r, n1, n1) - t2);
      }
    }
    const auto d = classify_equality(synthetic_point(h, n1), n1);
    if (d.d1_minimal && d.d2_minimal) CHECK(d.minimal);
    if (d.mu_i) CHECK(std::abs(d.mu_i->mu - d.mu_i->mu1 - d.mu_i->mu2) <= d.tolerance);
    if (d.mu_ii) CHECK(std::abs(d.mu_ii->mu - d.mu_ii->mu1 - d.mu_ii->mu2) <= d.tolerance);
  }
}

TEST_CASE("classical inequality on the round 3-sphere") {
  const auto chart = chart_of("s3_warped");
  const std::vector<double> u{pi / 2, pi / 2, pi};
  const auto e = evaluate(chart, u);
  const auto rep = chen_classical(e.point, e.R, chart.ambient());
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.rhs == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(rep.slack == doctest::Approx(1.75).epsilon(1e-9));
  CHECK_FALSE(rep.equality);
  CHECK(*rep.delta_form_lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(*rep.delta_form_rhs == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("classical bound as stated is negative on a hyperbolic plane") {
  // For surfaces the bound reduces to K >= K / 2, which fails once K < 0.
  const auto chart = chart_of("hyperbolic_warp");
  const std::vector<double> u{0.2, 0.1};
  const auto e = evaluate(chart, u);
  const auto rep = chen_classical(e.point, e.R, chart.ambient());
  CHECK(rep.lhs == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rep.slack == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(*rep.delta_form_slack) <= 1e-12);
}

TEST_CASE("warped inequality, case ii, on the round 3-sphere") {
  const auto chart = chart_of("s3_warped");
  const std::vector<double> u{pi / 2, pi / 2, pi};
  const auto e = evaluate(chart, u);
  const auto rep = chen_warped(e.point, e.R, e.lap.lap_ratio, chart.ambient(), Theorem::Warped41ii);
  CHECK(std::abs(rep.lhs) <= 1e-9);
  CHECK(rep.rhs == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(rep.slack == doctest::Approx(2.5).epsilon(1e-9));
  CHECK_FALSE(rep.equality);
  CHECK_FALSE(rep.minimality_consequence.has_value());
  CHECK_THROWS_AS(chen_warped(e.point, e.R, e.lap.lap_ratio, chart.ambient(), Theorem::Warped41i), CaseDimensionError);
}

TEST_CASE("warped inequality equality on the totally geodesic 3-sphere") {
  const auto chart = chart_of("great_sphere_s4");
  for (const auto& u : quasi_random_points(chart.domain(), 8, 0.05)) {
    const auto e = evaluate(chart, u);
    const auto rep = chen_warped(e.point, e.R, e.lap.lap_ratio, chart.ambient(), Theorem::Warped41ii);
    CHECK(std::abs(rep.slack) <= 1e-7);
    CHECK(rep.equality);
    REQUIRE(rep.minimality_consequence.has_value());
    CHECK(*rep.minimality_consequence);
  }
}

TEST_CASE("warped inequalities hold on the catalog charts") {
  for (const auto& entry : catalog_entries()) {
    INFO(entry.name);
    const auto chart = WarpedChart::build(entry.scene.chart);
    for (const auto& u : quasi_random_points(chart.domain(), 8, 0.05, 3)) {
      const auto e = evaluate(chart, u);
      const auto cl = chen_classical(e.point, e.R, chart.ambient());
      CHECK(*cl.delta_form_slack >= -1e-6);
      for (Theorem t : {Theorem::Warped41i, Theorem::Warped41ii}) {
        if ((t == Theorem::Warped41i ? chart.n1() : chart.n2()) < 2) continue;
        const auto rep = chen_warped(e.point, e.R, e.lap.lap_ratio, chart.ambient(), t);
        CHECK(rep.slack >= -1e-6);
        if (rep.equality) CHECK(rep.minimality_consequence.value_or(false));
      }
    }
  }
}

TEST_CASE("theorem names") {
  CHECK(std::string(theorem_name(Theorem::Classical13)) == "chen13");
  CHECK(std::string(theorem_name(Theorem::Warped41i)) == "chen41i");
  CHECK(std::string(theorem_name(Theorem::Warped41ii)) == "chen41ii");
}
