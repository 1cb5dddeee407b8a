#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "warpchen/immersion.hpp"

namespace warpchen {

// Default seed of the plane and k-plane samplers.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

// Curvature components in an orthonormal frame, stored so that
// R(i, j, i, j) is the sectional curvature of span{e_i, e_j}:
//   R(X, Y, X, Y) = g(R(X, Y) Y, X).
// `n1` records where the base block of an adapted frame ends.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  CurvatureTensor(int n, int n1) : n_(n), n1_(n1), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  int n1() const { return n1_; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  double& at(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }

  // Largest violation of antisymmetry, pair symmetry and the first Bianchi identity.
  double symmetry_defect() const;
  double max_abs_difference(const CurvatureTensor& other) const;

  // Restriction to the span of the given frame indices.
  CurvatureTensor restrict_to(std::span<const int> indices) const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  int n1_ = 0;
  std::vector<double> data_;
};

// Which frame directions a restricted invariant runs over.
struct SubspaceSel {
  enum class Kind { All, Base, Fiber, Custom };
  Kind kind = Kind::All;
  std::vector<int> custom;

  static SubspaceSel all() { return {Kind::All, {}}; }
  static SubspaceSel base() { return {Kind::Base, {}}; }
  static SubspaceSel fiber() { return {Kind::Fiber, {}}; }
  static SubspaceSel of(std::vector<int> idx) { return {Kind::Custom, std::move(idx)}; }

  // 0-based frame indices for a tensor of dimension n split at n1.
  std::vector<int> resolve(int n, int n1) const;
};

// Levi-Civita route: Christoffel symbols and curvature of the induced metric
// from its exact first and second partials, converted to the adapted frame.
CurvatureTensor curvature_intrinsic(const WarpedChart& chart, std::span<const double> u);

// Gauss equation route: space-form term plus quadratic terms in h.
CurvatureTensor curvature_gauss(const PointData& point, const SpaceForm& ambient);

// X, Y in frame coordinates (the frame metric is the identity).
double sectional(const CurvatureTensor& R, std::span<const double> x, std::span<const double> y);

double scalar_tau(const CurvatureTensor& R, const SubspaceSel& sel);

struct PlaneSearchOptions {
  std::uint64_t seed = kDefaultSeed;
  int samples = 512;
  int refine_starts = 8;
  int refine_steps = 200;
};

struct DeltaResult {
  double delta = 0.0;
  double tau = 0.0;
  double inf_k = 0.0;
  double coordinate_min = 0.0;     // best coordinate-pair plane
  std::vector<double> plane_x;     // orthonormal pair attaining inf_k, frame coordinates
  std::vector<double> plane_y;
  bool sampled = true;             // inf_k is a sampled upper bound of the true infimum
};

// tau(sel) - inf K(pi) over 2-planes pi inside the selected subspace.
DeltaResult delta_invariant(const CurvatureTensor& R, const SubspaceSel& sel, const PlaneSearchOptions& opts = {});

struct ThetaResult {
  double value = 0.0;
  bool sampled = true;
};

ThetaResult theta_k(const CurvatureTensor& R, int k, std::uint64_t seed = kDefaultSeed, int samples = 512);

struct WarpLaplacian {
  double laplacian = 0.0;          // Delta f with Delta = -div grad on (N1, g1)
  double warp = 0.0;               // f
  double lap_ratio = 0.0;          // n2 * Delta f / f
  double mixed_sum = 0.0;          // sum_{a, A} K(e_a ^ e_A) of the intrinsic curvature
  double identity_residual = 0.0;  // |mixed_sum - lap_ratio|
};

WarpLaplacian warp_laplacian(const WarpedChart& chart, std::span<const double> u);

// Same identity from already computed pieces (used when R is at hand).
WarpLaplacian warp_laplacian(const LocalJet& jet, int n1, const CurvatureTensor& intrinsic);

// |2 tau - 2 tau~ - n^2 |H|^2 + |h|^2| with tau~ = c n(n-1)/2.
double trace_identity_residual(const CurvatureTensor& R, const PointData& point, const SpaceForm& ambient);

// Curvature of the coordinate metric converted to the given orthonormal frame.
CurvatureTensor curvature_from_jet(const LocalJet& jet, const Matrix& frame, int n1);

}  // namespace warpchen
