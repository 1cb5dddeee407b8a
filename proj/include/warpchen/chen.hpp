#pragma once

// Chen's first inequality: the algebraic lemmas behind it, the classical
// statement for submanifolds of space forms, the warped-product version for
// plane sections tangent to either factor, and the shape-operator classifier
// for the equality case.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpchen/invariants.hpp"

namespace warpchen {

// alphas with beta chosen so that (sum a)^2 = (n-1)(sum a^2 + beta).
struct LemmaInstance {
  std::vector<double> alphas;
  double beta = 0.0;
};

double lemma_beta(std::span<const double> alphas);

struct LemmaCheck {
  bool holds = false;              // 2 a1 a2 >= beta
  bool equality = false;           // 2 a1 a2 == beta
  bool condition_matches = false;  // a1 + a2 = a3 = ... = an (vacuous for n = 2)
  double gap = 0.0;                // 2 a1 a2 - beta
};

// Throws HypothesisViolated when the instance does not satisfy the hypothesis
// to 1e-9 relative.
LemmaCheck check_lemma(const LemmaInstance& instance);

// Both sides of the two rearrangement identities used in the warped proof.
// Slot r = 0 of `h` plays the role of e_{n+1}.
struct RearrangementResidual {
  double lhs32 = 0.0, rhs32 = 0.0, res32 = 0.0;
  std::optional<double> lhs33, rhs33, res33;  // present when 3 <= n1 < n
};

RearrangementResidual rearrangement_identities(const ShapeCoefficients& h, int n1);

struct DMinimalIdentity {
  double lhs = 0.0;  // |h(D1, D2)|^2
  double rhs = 0.0;  // c n1 n2 - n2 Delta f / f
  double residual = 0.0;
};

// Throws PreconditionError unless the point is D1- and D2-minimal within 1e-8.
DMinimalIdentity dminimal_identity(const PointData& point, double lap_ratio, const SpaceForm& ambient);

struct MuDecomposition {
  double mu1 = 0.0, mu2 = 0.0, mu = 0.0;
};

struct EqualityDiagnostics {
  double tolerance = 0.0;
  bool mixed_tg = false;
  double mixed_max = 0.0;  // max |h^r_{aA}|
  bool d1_minimal = false;
  double d1_trace_max = 0.0;
  bool d2_minimal = false;
  double d2_trace_max = 0.0;
  bool minimal = false;
  double mean_curvature = 0.0;
  // Block forms of the equality case; empty when the factor has dimension < 2.
  std::optional<bool> pattern_i;
  std::optional<bool> pattern_ii;
  std::optional<MuDecomposition> mu_i;
  std::optional<MuDecomposition> mu_ii;
  // Classical equality form, over the whole tangent space.
  std::optional<bool> pattern_classical;
  std::optional<MuDecomposition> mu_classical;
};

// tol = rel_tol * (1 + |h|).
EqualityDiagnostics classify_equality(const PointData& point, int n1, double rel_tol = 1e-6);

enum class Theorem { Classical13, Warped41i, Warped41ii };
const char* theorem_name(Theorem t);

struct InequalityOptions {
  double equality_within = 1e-7;
  double classifier_tol = 1e-6;
  PlaneSearchOptions search{};
};

struct InequalityReport {
  Theorem theorem = Theorem::Classical13;
  std::vector<double> point;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // nonnegative when the inequality holds
  bool sampled = true;  // lhs rests on a sampled plane search
  double equality_within = 0.0;
  bool equality = false;
  std::optional<EqualityDiagnostics> classifier;
  // Warped cases: when equality is detected, whether the classifier confirms
  // mixed totally geodesic, D1-, D2-minimal and minimal.
  std::optional<bool> minimality_consequence;
  // Classical case: delta = tau - inf K against n^2(n-2)/(2(n-1))|H|^2 + (n+1)(n-2)c/2.
  std::optional<double> delta_form_lhs, delta_form_rhs, delta_form_slack;
};

// inf K >= (tau - n^2(n-2)/(n-1) |H|^2 - (n+1)(n-2) c) / 2, evaluated as written.
// The equality diagnostics compare A_{e_{n+1}} with diag(mu1, mu2, mu, ..., mu)
// and the remaining A_{e_r} with the trace-free 2x2 corner form.
InequalityReport chen_classical(const PointData& point, const CurvatureTensor& R, const SpaceForm& ambient,
                                const InequalityOptions& opts = {});

// delta_{N_i}(x) <= n^2/2 |H|^2 - n2 Delta f / f + n_i(n_i + 2 n_j - 1) c / 2 - c,
// with delta_{N_i} taken from M's curvature restricted to T_x N_i.
InequalityReport chen_warped(const PointData& point, const CurvatureTensor& R, double lap_ratio,
                             const SpaceForm& ambient, Theorem which, const InequalityOptions& opts = {});

}  // namespace warpchen
