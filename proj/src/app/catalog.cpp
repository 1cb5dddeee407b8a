#include "warpchen/catalog.hpp"

#include <algorithm>

#include "warpchen/errors.hpp"

namespace warpchen {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

Scene make(std::string name, std::vector<std::string> base, std::vector<std::string> fiber, std::string warp,
           SpaceForm ambient, std::vector<std::string> components, std::vector<Interval> domain,
           std::vector<std::vector<double>> points, std::vector<int> grid, std::vector<Check> checks) {
  Scene s;
  s.name = std::move(name);
  s.chart.base_coords = std::move(base);
  s.chart.fiber_coords = std::move(fiber);
  s.chart.warp = std::move(warp);
  s.chart.ambient = ambient;
  s.chart.components = std::move(components);
  s.chart.domain = std::move(domain);
  s.points = std::move(points);
  s.grid = GridSpec{std::move(grid), 0.05};
  s.checks = std::move(checks);
  std::sort(s.checks.begin(), s.checks.end());
  return s;
}

std::vector<CatalogEntry> build() {
  using C = Check;
  const SpaceForm e3{AmbientKind::Euclidean, 0.0, 3};
  const SpaceForm e4{AmbientKind::Euclidean, 0.0, 4};
  const SpaceForm e5{AmbientKind::Euclidean, 0.0, 5};
  const SpaceForm s3{AmbientKind::Sphere, 1.0, 3};
  const SpaceForm s4{AmbientKind::Sphere, 1.0, 4};
  const SpaceForm h3{AmbientKind::Hyperbolic, -1.0, 3};

  std::vector<CatalogEntry> out;

  out.push_back({"plane_product",
                 "R^2 x R^2 as a flat 4-plane in R^5",
                 {"K = 0 on every plane", "|H|^2 = 0, |h|^2 = 0", "lap_ratio = 0",
                  "chen41i and chen41ii hold with equality"},
                 make("plane_product", {"u1", "u2"}, {"v1", "v2"}, "1", e5, {"u1", "u2", "v1", "v2", "0"},
                      {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}, {{0.25, -0.5, 0.5, 0.125}}, {3, 3, 1, 1},
                      {C::Gauss, C::Eq24, C::Lemma31, C::Chen13, C::Chen41i, C::Chen41ii, C::Classify})});

  out.push_back({"flat_torus_r4",
                 "product of two circles of radius 1/sqrt(2) in R^4",
                 {"K = 0", "|H|^2 = 1, |h|^2 = 4", "lap_ratio = 0"},
                 make("flat_torus_r4", {"t"}, {"s"}, "1/sqrt(2)", e4,
                      {"cos(t)/sqrt(2)", "sin(t)/sqrt(2)", "cos(s)/sqrt(2)", "sin(s)/sqrt(2)"},
                      {{0, kTwoPi}, {0, kTwoPi}}, {{1.0, 2.0}}, {5, 5}, {C::Gauss, C::Eq24, C::Chen13})});

  out.push_back({"clifford_s3",
                 "Clifford torus in the unit 3-sphere",
                 {"K = 0", "|H|^2 = 0, |h|^2 = 2", "minimal but not D-minimal"},
                 make("clifford_s3", {"t"}, {"s"}, "1/sqrt(2)", s3,
                      {"cos(t)/sqrt(2)", "sin(t)/sqrt(2)", "cos(s)/sqrt(2)", "sin(s)/sqrt(2)"},
                      {{0, kTwoPi}, {0, kTwoPi}}, {{1.0, 2.0}}, {5, 5}, {C::Gauss, C::Eq24, C::Chen13, C::Lemma31})});

  out.push_back({"s2_revolution",
                 "unit 2-sphere as a surface of revolution in R^3",
                 {"K = 1", "|H|^2 = 1, |h|^2 = 2", "lap_ratio = 1"},
                 make("s2_revolution", {"t"}, {"s"}, "sin(t)", e3, {"sin(t)*cos(s)", "sin(t)*sin(s)", "cos(t)"},
                      {{0, kPi}, {0, kTwoPi}}, {{kPi / 2, kPi}}, {9, 1}, {C::Gauss, C::Eq24, C::Chen13})});

  out.push_back({"s3_warped",
                 "(0, pi) x_{sin t} S^2, the unit 3-sphere in R^4",
                 {"K = 1", "|H|^2 = 1, |h|^2 = 3", "lap_ratio = 2", "chen41ii: lhs 0, rhs 2.5, slack 2.5",
                  "chen13: inf K 1, rhs -0.75, slack 1.75"},
                 make("s3_warped", {"t"}, {"s", "p"}, "sin(t)", e4,
                      {"cos(t)", "sin(t)*cos(s)", "sin(t)*sin(s)*cos(p)", "sin(t)*sin(s)*sin(p)"},
                      {{0, kPi}, {0, kPi}, {0, kTwoPi}}, {{kPi / 2, kPi / 2, kPi}}, {9, 1, 1},
                      {C::Gauss, C::Eq24, C::Chen13, C::Chen41ii, C::Classify, C::Theta})});

  out.push_back({"great_sphere_s4",
                 "totally geodesic unit 3-sphere in the unit 4-sphere",
                 {"K = 1", "h = 0", "lap_ratio = 2", "chen41ii holds with equality", "mixed totally geodesic, minimal"},
                 make("great_sphere_s4", {"t"}, {"s", "p"}, "sin(t)", s4,
                      {"cos(t)", "sin(t)*cos(s)", "sin(t)*sin(s)*cos(p)", "sin(t)*sin(s)*sin(p)", "0"},
                      {{0, kPi}, {0, kPi}, {0, kTwoPi}}, {{kPi / 2, kPi / 2, kPi}}, {9, 1, 1},
                      {C::Gauss, C::Eq24, C::Lemma31, C::Chen13, C::Chen41ii, C::Classify, C::Theta})});

  out.push_back({"hyperbolic_warp",
                 "horospherical chart of a totally geodesic H^2 in H^3",
                 {"K = -1", "h = 0", "lap_ratio = -1", "chen13: inf K -1, rhs -0.5"},
                 make("hyperbolic_warp", {"t"}, {"s"}, "exp(t)", h3,
                      {"cosh(t) + s^2*exp(t)/2", "sinh(t) - s^2*exp(t)/2", "s*exp(t)", "0"}, {{-1, 1}, {-1, 1}},
                      {{0.0, 0.0}}, {5, 5}, {C::Gauss, C::Eq24, C::Lemma31, C::Chen13})});

  out.push_back({"cylinder",
                 "unit circular cylinder in R^3",
                 {"K = 0", "|H|^2 = 1/4, |h|^2 = 1", "lap_ratio = 0"},
                 make("cylinder", {"t"}, {"s"}, "1", e3, {"cos(t)", "sin(t)", "s"}, {{0, kTwoPi}, {-1, 1}},
                      {{1.0, 0.5}}, {5, 5}, {C::Gauss, C::Eq24, C::Chen13})});
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  throw UnknownCatalogEntry("no catalog entry named '" + name + "'");
}

Scene catalog(const std::string& name) { return catalog_entry(name).scene; }

}  // namespace warpchen
