#include "warpchen/chen.hpp"

#include <algorithm>
#include <cmath>

namespace warpchen {

namespace {

constexpr double kLemmaHypothesisTol = 1e-9;
constexpr double kLemmaHoldsSlack = 1e-10;
constexpr double kLemmaEqualityTol = 1e-9;
constexpr double kDMinimalTol = 1e-8;

double sq(double x) { return x * x; }

// Block [lo, hi) of A_{e_{n+1}} (slot 0) has the form
//   [[mu1, h12], [h12, mu2]] (+) mu I,  mu = mu1 + mu2,
// with `corner_offdiag` deciding whether h12 may be nonzero, and every other
// slot r has the trace-free 2x2 corner with zeros elsewhere in the block.
bool block_pattern(const ShapeCoefficients& h, int lo, int hi, bool corner_offdiag, double tol, MuDecomposition& mu) {
  const int q = h.codim();
  const int c0 = lo, c1 = lo + 1;
  mu.mu1 = h(0, c0, c0);
  mu.mu2 = h(0, c1, c1);
  mu.mu = (hi - lo > 2) ? h(0, lo + 2, lo + 2) : mu.mu1 + mu.mu2;
  bool ok = std::abs(mu.mu - (mu.mu1 + mu.mu2)) <= tol;
  for (int a = lo; a < hi; ++a)
    for (int b = lo; b < hi; ++b) {
      const bool corner = (a == c0 || a == c1) && (b == c0 || b == c1);
      if (corner) {
        if (a != b && !corner_offdiag) ok = ok && std::abs(h(0, a, b)) <= tol;
        continue;
      }
      const double want = (a == b) ? mu.mu1 + mu.mu2 : 0.0;
      ok = ok && std::abs(h(0, a, b) - want) <= tol;
    }
  for (int r = 1; r < q; ++r) {
    ok = ok && std::abs(h(r, c0, c0) + h(r, c1, c1)) <= tol;
    for (int a = lo; a < hi; ++a)
      for (int b = lo; b < hi; ++b) {
        const bool corner = (a == c0 || a == c1) && (b == c0 || b == c1);
        if (!corner) ok = ok && std::abs(h(r, a, b)) <= tol;
      }
  }
  return ok;
}

}  // namespace

double lemma_beta(std::span<const double> alphas) {
  const std::size_t n = alphas.size();
  if (n < 2) throw ShapeError("the lemma needs at least two numbers");
  double sum = 0.0, sum2 = 0.0;
  for (double a : alphas) {
    sum += a;
    sum2 += a * a;
  }
  return sum * sum / static_cast<double>(n - 1) - sum2;
}

LemmaCheck check_lemma(const LemmaInstance& inst) {
  const auto& a = inst.alphas;
  const std::size_t n = a.size();
  if (n < 2) throw ShapeError("the lemma needs at least two numbers");
  double sum = 0.0, sum2 = 0.0;
  for (double x : a) {
    sum += x;
    sum2 += x * x;
  }
  const double lhs = sum * sum;
  const double rhs = static_cast<double>(n - 1) * (sum2 + inst.beta);
  if (std::abs(lhs - rhs) > kLemmaHypothesisTol * std::max({1.0, std::abs(lhs), std::abs(rhs)}))
    throw HypothesisViolated("(sum a)^2 != (n-1)(sum a^2 + beta)");

  LemmaCheck out;
  out.gap = 2.0 * a[0] * a[1] - inst.beta;
  out.holds = out.gap >= -kLemmaHoldsSlack;
  out.equality = std::abs(out.gap) <= kLemmaEqualityTol;
  double dev = 0.0;
  for (std::size_t i = 2; i < n; ++i) dev = std::max(dev, std::abs(a[0] + a[1] - a[i]));
  out.condition_matches = dev <= kLemmaEqualityTol;
  return out;
}

RearrangementResidual rearrangement_identities(const ShapeCoefficients& h, int n1) {
  const int q = h.codim();
  const int n = h.dim();
  if (q < 1) throw ShapeError("need at least one normal direction");
  if (n < 3) throw ShapeError("the rearrangement identities need n >= 3");
  for (int r = 0; r < q; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (h(r, i, j) != h(r, j, i)) throw ShapeError("coefficients must be symmetric");

  RearrangementResidual out;
  {
    CompensatedSum lhs, rhs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) lhs.add(0.5 * sq(h(0, i, j)));
    for (int r = 1; r < q; ++r) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lhs.add(0.5 * sq(h(r, i, j)));
      lhs.add(h(r, 0, 0) * h(r, 1, 1));
    }
    for (int r = 0; r < q; ++r) lhs.add(-sq(h(r, 0, 1)));

    for (int i = 2; i < n; ++i)
      for (int j = 2; j < n; ++j)
        if (i != j) rhs.add(0.5 * sq(h(0, i, j)));
    for (int r = 1; r < q; ++r) {
      for (int i = 2; i < n; ++i)
        for (int j = 2; j < n; ++j) rhs.add(0.5 * sq(h(r, i, j)));
      rhs.add(0.5 * sq(h(r, 0, 0) + h(r, 1, 1)));
    }
    for (int r = 0; r < q; ++r)
      for (int j = 2; j < n; ++j) rhs.add(sq(h(r, 0, j)) + sq(h(r, 1, j)));
    out.lhs32 = lhs.value();
    out.rhs32 = rhs.value();
    out.res32 = std::abs(out.lhs32 - out.rhs32);
  }

  if (n1 >= 3 && n1 < n) {
    CompensatedSum lhs, rhs;
    for (int i = 2; i < n; ++i)
      for (int j = 2; j < n; ++j)
        if (i != j) lhs.add(0.5 * sq(h(0, i, j)));
    for (int r = 1; r < q; ++r)
      for (int i = 2; i < n; ++i)
        for (int j = 2; j < n; ++j) lhs.add(0.5 * sq(h(r, i, j)));
    for (int r = 0; r < q; ++r)
      for (int j = 2; j < n; ++j) lhs.add(sq(h(r, 0, j)) + sq(h(r, 1, j)));

    for (int a = 2; a < n1; ++a)
      for (int b = 2; b < n1; ++b)
        if (a != b) rhs.add(0.5 * sq(h(0, a, b)));
    for (int A = n1; A < n; ++A)
      for (int B = n1; B < n; ++B)
        if (A != B) rhs.add(0.5 * sq(h(0, A, B)));
    for (int r = 1; r < q; ++r) {
      for (int a = 2; a < n1; ++a)
        for (int b = 2; b < n1; ++b) rhs.add(0.5 * sq(h(r, a, b)));
      for (int A = n1; A < n; ++A)
        for (int B = n1; B < n; ++B) rhs.add(0.5 * sq(h(r, A, B)));
    }
    for (int r = 0; r < q; ++r) {
      for (int a = 2; a < n1; ++a) rhs.add(sq(h(r, 0, a)) + sq(h(r, 1, a)));
      for (int a = 0; a < n1; ++a)
        for (int A = n1; A < n; ++A) rhs.add(sq(h(r, a, A)));
    }
    out.lhs33 = lhs.value();
    out.rhs33 = rhs.value();
    out.res33 = std::abs(*out.lhs33 - *out.rhs33);
  }
  return out;
}

DMinimalIdentity dminimal_identity(const PointData& point, double lap_ratio, const SpaceForm& ambient) {
  const int n = point.n(), n1 = point.n1, n2 = point.n2, q = point.codim();
  for (int r = 0; r < q; ++r) {
    double t1 = 0.0, t2 = 0.0;
    for (int a = 0; a < n1; ++a) t1 += point.h(r, a, a);
    for (int A = n1; A < n; ++A) t2 += point.h(r, A, A);
    if (std::abs(t1) > kDMinimalTol || std::abs(t2) > kDMinimalTol)
      throw PreconditionError("immersion is not D-minimal at this point (block traces " + std::to_string(t1) + ", " +
                              std::to_string(t2) + ")");
  }
  CompensatedSum mixed;
  for (int r = 0; r < q; ++r)
    for (int a = 0; a < n1; ++a)
      for (int A = n1; A < n; ++A) mixed.add(sq(point.h(r, a, A)));
  DMinimalIdentity out;
  out.lhs = mixed.value();
  // tau~ of a k-plane in M(c) is c k(k-1)/2, so tau~(T M) - tau~(T N1) - tau~(T N2) = c n1 n2.
  out.rhs = ambient.c * n1 * n2 - lap_ratio;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

EqualityDiagnostics classify_equality(const PointData& point, int n1, double rel_tol) {
  const auto& h = point.h;
  const int n = h.dim(), q = h.codim();
  const int n2 = n - n1;
  EqualityDiagnostics d;
  d.tolerance = rel_tol * (1.0 + std::sqrt(point.h2));
  for (int r = 0; r < q; ++r) {
    double t1 = 0.0, t2 = 0.0;
    for (int a = 0; a < n1; ++a) t1 += h(r, a, a);
    for (int A = n1; A < n; ++A) t2 += h(r, A, A);
    d.d1_trace_max = std::max(d.d1_trace_max, std::abs(t1));
    d.d2_trace_max = std::max(d.d2_trace_max, std::abs(t2));
    d.mean_curvature = std::max(d.mean_curvature, std::abs(t1 + t2) / n);
    for (int a = 0; a < n1; ++a)
      for (int A = n1; A < n; ++A) d.mixed_max = std::max(d.mixed_max, std::abs(h(r, a, A)));
  }
  d.mixed_tg = d.mixed_max <= d.tolerance;
  d.d1_minimal = d.d1_trace_max <= d.tolerance;
  d.d2_minimal = d.d2_trace_max <= d.tolerance;
  d.minimal = d.mean_curvature * n <= d.tolerance;

  auto mixed_zero = [&] {
    for (int r = 0; r < q; ++r)
      for (int a = 0; a < n1; ++a)
        for (int A = n1; A < n; ++A)
          if (std::abs(h(r, a, A)) > d.tolerance) return false;
    return true;
  };
  if (n1 >= 2) {
    MuDecomposition mu;
    d.pattern_i = mixed_zero() && block_pattern(h, 0, n1, true, d.tolerance, mu);
    if (*d.pattern_i) d.mu_i = mu;
  }
  if (n2 >= 2) {
    MuDecomposition mu;
    d.pattern_ii = mixed_zero() && block_pattern(h, n1, n, true, d.tolerance, mu);
    if (*d.pattern_ii) d.mu_ii = mu;
  }
  if (n >= 2) {
    MuDecomposition mu;
    d.pattern_classical = block_pattern(h, 0, n, false, d.tolerance, mu);
    if (*d.pattern_classical) d.mu_classical = mu;
  }
  return d;
}

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::Classical13: return "chen13";
    case Theorem::Warped41i: return "chen41i";
    case Theorem::Warped41ii: return "chen41ii";
  }
  return "?";
}

InequalityReport chen_classical(const PointData& point, const CurvatureTensor& R, const SpaceForm& ambient,
                                const InequalityOptions& opts) {
  const int n = point.n();
  if (n < 2) throw CaseDimensionError("the classical inequality needs n >= 2");
  const DeltaResult d = delta_invariant(R, SubspaceSel::all(), opts.search);
  const double nn = n;
  const double c = ambient.c;

  InequalityReport rep;
  rep.theorem = Theorem::Classical13;
  rep.point = point.u;
  rep.lhs = d.inf_k;
  rep.sampled = d.sampled;
  rep.rhs = 0.5 * (d.tau - nn * nn * (nn - 2.0) / (nn - 1.0) * point.meanH2 - (nn + 1.0) * (nn - 2.0) * c);
  rep.slack = rep.lhs - rep.rhs;
  rep.equality_within = opts.equality_within;
  rep.equality = std::abs(rep.slack) <= opts.equality_within;
  rep.classifier = classify_equality(point, point.n1, opts.classifier_tol);

  rep.delta_form_lhs = d.delta;
  rep.delta_form_rhs = nn * nn * (nn - 2.0) / (2.0 * (nn - 1.0)) * point.meanH2 + 0.5 * (nn + 1.0) * (nn - 2.0) * c;
  rep.delta_form_slack = *rep.delta_form_rhs - *rep.delta_form_lhs;
  return rep;
}

InequalityReport chen_warped(const PointData& point, const CurvatureTensor& R, double lap_ratio,
                             const SpaceForm& ambient, Theorem which, const InequalityOptions& opts) {
  const int n1 = point.n1, n2 = point.n2;
  const double nn = point.n();
  const double c = ambient.c;
  SubspaceSel sel;
  double constant = 0.0;
  switch (which) {
    case Theorem::Warped41i:
      if (n1 < 2) throw CaseDimensionError("case i requires n₁ ≥ 2");
      sel = SubspaceSel::base();
      constant = 0.5 * n1 * (n1 + 2.0 * n2 - 1.0) * c - c;
      break;
    case Theorem::Warped41ii:
      if (n2 < 2) throw CaseDimensionError("case ii requires n₂ ≥ 2");
      sel = SubspaceSel::fiber();
      constant = 0.5 * n2 * (n2 + 2.0 * n1 - 1.0) * c - c;
      break;
    default:
      throw CaseDimensionError("chen_warped handles cases i and ii only");
  }
  const DeltaResult d = delta_invariant(R, sel, opts.search);

  InequalityReport rep;
  rep.theorem = which;
  rep.point = point.u;
  rep.lhs = d.delta;
  rep.sampled = d.sampled;
  rep.rhs = 0.5 * nn * nn * point.meanH2 - lap_ratio + constant;
  rep.slack = rep.rhs - rep.lhs;
  rep.equality_within = opts.equality_within;
  rep.equality = std::abs(rep.slack) <= opts.equality_within;
  rep.classifier = classify_equality(point, n1, opts.classifier_tol);
  if (rep.equality) {
    const auto& cl = *rep.classifier;
    rep.minimality_consequence = cl.mixed_tg && cl.d1_minimal && cl.d2_minimal && cl.minimal;
  }
  return rep;
}

}  // namespace warpchen
