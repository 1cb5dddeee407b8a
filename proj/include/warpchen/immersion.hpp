#pragma once

// Warped-product immersions N1 x_f N2 -> M(c) given by parametric charts.
//
// Sphere and hyperbolic ambients are presented through their standard model
// hypersurfaces of radius 1/sqrt(|c|) in a flat space of dimension m+1
// (Minkowski signature, time-like first coordinate, for the hyperbolic case).
// Either way <x, x> = 1/c for points of the model.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "warpchen/exprlang.hpp"
#include "warpchen/geomcore.hpp"
#include "warpchen/hyperdual.hpp"

namespace warpchen {

enum class AmbientKind { Euclidean, Sphere, Hyperbolic };

const char* ambient_kind_name(AmbientKind kind);
AmbientKind parse_ambient_kind(const std::string& name);

struct SpaceForm {
  AmbientKind kind = AmbientKind::Euclidean;
  double c = 0.0;
  int m = 0;

  // Number of coordinates of the flat model space.
  int model_dim() const { return kind == AmbientKind::Euclidean ? m : m + 1; }
  // Sign of coordinate `alpha` in the model inner product.
  double signature(int alpha) const { return (kind == AmbientKind::Hyperbolic && alpha == 0) ? -1.0 : 1.0; }
  double inner(std::span<const double> a, std::span<const double> b) const;
  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Structured description of a chart, as read from a scene file.
struct ChartSpec {
  std::vector<std::string> base_coords;
  std::vector<std::string> fiber_coords;
  std::string warp;
  std::vector<std::string> components;
  SpaceForm ambient;
  std::vector<Interval> domain;  // base coordinates first, then fiber
};

class WarpedChart;

// Value and derivatives of the immersion and its induced metric at one point.
struct LocalJet {
  std::vector<double> u;
  std::vector<double> phi;          // model coordinates of the image point
  Matrix dphi;                      // model_dim x n, column i = d_i phi
  std::vector<Matrix> d2phi;        // per model coordinate: n x n Hessian
  std::vector<HyperDual> metric;    // n*n, g_ij with first and second partials
  HyperDual warp;                   // f with partials

  int n() const { return static_cast<int>(u.size()); }
  const HyperDual& g(int i, int j) const { return metric[static_cast<std::size_t>(i) * u.size() + j]; }
  Matrix metric_values() const;
};

class WarpedChart {
 public:
  // Validates the spec, including positivity of f and the block structure
  // g = g1 + f^2 g2 at 16 quasi-random domain points. Throws ValidationError.
  static WarpedChart build(const ChartSpec& spec);

  const ChartSpec& spec() const { return spec_; }
  int n1() const { return static_cast<int>(spec_.base_coords.size()); }
  int n2() const { return static_cast<int>(spec_.fiber_coords.size()); }
  int n() const { return n1() + n2(); }
  const SpaceForm& ambient() const { return spec_.ambient; }
  const std::vector<std::string>& coords() const { return coords_; }
  const Expr& warp() const { return warp_; }
  const std::vector<Expr>& components() const { return components_; }
  const std::vector<Interval>& domain() const { return spec_.domain; }

  // Throws OutOfDomain unless u lies strictly inside the domain box.
  void check_in_domain(std::span<const double> u) const;

  LocalJet jet(std::span<const double> u) const;
  double warp_value(std::span<const double> u) const;

 private:
  ChartSpec spec_;
  std::vector<std::string> coords_;
  Expr warp_;
  std::vector<Expr> components_;
};

// Coefficients h^r_ij, r over normal directions, symmetric in (i, j).
class ShapeCoefficients {
 public:
  ShapeCoefficients() = default;
  ShapeCoefficients(int q, int n) : q_(q), n_(n), data_(static_cast<std::size_t>(q) * n * n, 0.0) {}

  int codim() const { return q_; }
  int dim() const { return n_; }
  double operator()(int r, int i, int j) const { return data_[index(r, i, j)]; }
  // Writes both (i, j) and (j, i).
  void set(int r, int i, int j, double v) {
    data_[index(r, i, j)] = v;
    data_[index(r, j, i)] = v;
  }
  Matrix slice(int r) const;

 private:
  std::size_t index(int r, int i, int j) const { return (static_cast<std::size_t>(r) * n_ + i) * n_ + j; }
  int q_ = 0;
  int n_ = 0;
  std::vector<double> data_;
};

struct PointData {
  std::vector<double> u;
  int n1 = 0;
  int n2 = 0;
  Matrix g;                  // induced metric, coordinate basis
  Frame tangent_frame;       // chart coordinates, orthonormal under g, base block first
  Matrix tangent_ambient;    // model coordinates of the tangent frame vectors
  Frame normal_frame;        // model coordinates, orthonormal under the model form
  std::vector<double> position;
  ShapeCoefficients h;
  std::vector<double> H;     // mean curvature components in normal_frame
  double meanH2 = 0.0;
  double h2 = 0.0;

  int n() const { return n1 + n2; }
  int codim() const { return h.codim(); }
};

Matrix first_fundamental_form(const WarpedChart& chart, std::span<const double> u);
PointData second_fundamental_form(const WarpedChart& chart, std::span<const double> u);

// Halton points strictly inside the box, shrunk by `margin` (fraction of each
// side) at both ends. `skip` offsets into the sequence.
std::vector<std::vector<double>> quasi_random_points(std::span<const Interval> box, int count, double margin,
                                                     int skip = 0);

}  // namespace warpchen
