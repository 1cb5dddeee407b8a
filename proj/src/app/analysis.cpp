#include "warpchen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "json.hpp"
#include "warpchen/catalog.hpp"
#include "warpchen/errors.hpp"

namespace warpchen {

using json = nlohmann::ordered_json;

namespace {

bool wants(const std::vector<Check>& checks, Check c) {
  return std::find(checks.begin(), checks.end(), c) != checks.end();
}

json mu_json(const MuDecomposition& m) { return json{{"mu1", m.mu1}, {"mu2", m.mu2}, {"mu", m.mu}}; }

json classifier_json(const EqualityDiagnostics& d) {
  json j;
  j["tolerance"] = d.tolerance;
  j["mixed_tg"] = d.mixed_tg;
  j["mixed_max"] = d.mixed_max;
  j["d1_minimal"] = d.d1_minimal;
  j["d1_trace_max"] = d.d1_trace_max;
  j["d2_minimal"] = d.d2_minimal;
  j["d2_trace_max"] = d.d2_trace_max;
  j["minimal"] = d.minimal;
  j["mean_curvature"] = d.mean_curvature;
  if (d.pattern_i) j["pattern_i"] = *d.pattern_i;
  if (d.mu_i) j["mu_i"] = mu_json(*d.mu_i);
  if (d.pattern_ii) j["pattern_ii"] = *d.pattern_ii;
  if (d.mu_ii) j["mu_ii"] = mu_json(*d.mu_ii);
  if (d.pattern_classical) j["pattern_classical"] = *d.pattern_classical;
  if (d.mu_classical) j["mu_classical"] = mu_json(*d.mu_classical);
  return j;
}

json inequality_json(const InequalityReport& r, double slack_tol) {
  json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["equality"] = r.equality;
  j["method"] = r.sampled ? "sampled" : "exact";
  if (r.minimality_consequence) j["minimality_consequence"] = *r.minimality_consequence;
  if (r.delta_form_lhs) {
    j["delta_form"] = json{{"lhs", *r.delta_form_lhs}, {"rhs", *r.delta_form_rhs}, {"slack", *r.delta_form_slack}};
  }
  j["passed"] = r.slack >= -slack_tol;
  return j;
}

json residual_json(double residual, double tol) { return json{{"residual", residual}, {"passed", residual <= tol}}; }

json point_json(std::size_t index, const std::vector<std::string>& coords, const PointRecord& rec,
                const std::vector<Check>& checks, const Tolerances& tol) {
  json j;
  j["index"] = index;
  json at = json::object();
  for (std::size_t i = 0; i < coords.size(); ++i) at[coords[i]] = rec.u[i];
  j["point"] = at;
  j["meanH2"] = rec.meanH2;
  j["h2"] = rec.h2;
  j["tau"] = rec.tau;
  j["trace"] = residual_json(rec.trace_residual, tol.trace);
  if (wants(checks, Check::Gauss)) j["gauss"] = residual_json(rec.gauss_residual, tol.gauss);
  if (wants(checks, Check::Eq24)) {
    j["eq24"] = json{{"laplacian", rec.eq24.laplacian},     {"warp", rec.eq24.warp},
                     {"lap_ratio", rec.eq24.lap_ratio},     {"mixed_sum", rec.eq24.mixed_sum},
                     {"residual", rec.eq24.identity_residual}, {"passed", rec.eq24.identity_residual <= tol.eq24}};
  }
  if (wants(checks, Check::Lemma31)) {
    if (rec.lemma31) {
      j["lemma31"] = json{{"applicable", true},
                          {"lhs", rec.lemma31->lhs},
                          {"rhs", rec.lemma31->rhs},
                          {"residual", rec.lemma31->residual},
                          {"passed", rec.lemma31->residual <= tol.lemma31}};
    } else {
      j["lemma31"] = json{{"applicable", false}};
    }
  }
  if (rec.chen13 && wants(checks, Check::Chen13)) j["chen13"] = inequality_json(*rec.chen13, tol.slack);
  if (rec.chen41i && wants(checks, Check::Chen41i)) j["chen41i"] = inequality_json(*rec.chen41i, tol.slack);
  if (rec.chen41ii && wants(checks, Check::Chen41ii)) j["chen41ii"] = inequality_json(*rec.chen41ii, tol.slack);
  if (wants(checks, Check::Classify) && rec.classify) {
    json c = classifier_json(*rec.classify);
    const auto failed = failed_checks(rec, {Check::Classify}, tol);
    c["passed"] = failed.empty();
    j["classify"] = c;
  }
  if (wants(checks, Check::Theta)) {
    json t = json::object();
    for (const auto& [k, v] : rec.theta) t[std::to_string(k)] = v;
    j["theta"] = t;
  }
  return j;
}

json scene_json(const Scene& s) {
  const auto coords = s.coords();
  json chart;
  chart["base"] = s.chart.base_coords;
  chart["fiber"] = s.chart.fiber_coords;
  chart["warp"] = s.chart.warp;
  chart["ambient"] = json{{"kind", ambient_kind_name(s.chart.ambient.kind)}, {"c", s.chart.ambient.c}, {"m", s.chart.ambient.m}};
  chart["components"] = s.chart.components;
  json dom = json::object();
  for (std::size_t i = 0; i < coords.size(); ++i) dom[coords[i]] = {s.chart.domain[i].lo, s.chart.domain[i].hi};
  chart["domain"] = dom;

  json j;
  j["name"] = s.name;
  j["chart"] = chart;
  json pts = json::array();
  for (const auto& p : s.points) {
    json pj = json::object();
    for (std::size_t i = 0; i < coords.size(); ++i) pj[coords[i]] = p[i];
    pts.push_back(pj);
  }
  j["points"] = pts;
  if (s.grid) {
    json counts = json::object();
    for (std::size_t i = 0; i < coords.size(); ++i) counts[coords[i]] = s.grid->counts[i];
    j["grid"] = json{{"counts", counts}, {"margin", s.grid->margin}};
  }
  json checks = json::array();
  for (Check c : s.checks) checks.push_back(check_name(c));
  j["checks"] = checks;
  json tol = json::object();
  for (const auto& [k, v] : s.tolerances.as_map()) tol[k] = v;
  j["tolerances"] = tol;
  return j;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PointRecord analyze_point(const WarpedChart& chart, const std::vector<double>& u, const std::vector<Check>& checks,
                          const Tolerances& tol, std::uint64_t seed, bool everything) {
  chart.check_in_domain(u);
  const int n1 = chart.n1(), n2 = chart.n2();
  const SpaceForm& amb = chart.ambient();
  const auto want = [&](Check c) { return everything || wants(checks, c); };

  PointRecord rec;
  rec.u = u;
  const PointData pt = second_fundamental_form(chart, u);
  const LocalJet jet = chart.jet(u);
  const CurvatureTensor R = curvature_from_jet(jet, pt.tangent_frame.vectors, n1);

  rec.meanH2 = pt.meanH2;
  rec.h2 = pt.h2;
  rec.tau = scalar_tau(R, SubspaceSel::all());
  rec.tau_base = scalar_tau(R, SubspaceSel::base());
  rec.tau_fiber = scalar_tau(R, SubspaceSel::fiber());
  rec.trace_residual = trace_identity_residual(R, pt, amb);
  rec.gauss_residual = R.max_abs_difference(curvature_gauss(pt, amb));
  rec.eq24 = warp_laplacian(jet, n1, R);

  if (want(Check::Lemma31)) {
    try {
      rec.lemma31 = dminimal_identity(pt, rec.eq24.lap_ratio, amb);
    } catch (const PreconditionError&) {
      rec.lemma31.reset();
    }
  }

  InequalityOptions opts;
  opts.equality_within = tol.equality;
  opts.classifier_tol = tol.classifier;
  opts.search.seed = seed;
  if (want(Check::Chen13)) rec.chen13 = chen_classical(pt, R, amb, opts);
  if (want(Check::Chen41i) && n1 >= 2) rec.chen41i = chen_warped(pt, R, rec.eq24.lap_ratio, amb, Theorem::Warped41i, opts);
  if (want(Check::Chen41ii) && n2 >= 2)
    rec.chen41ii = chen_warped(pt, R, rec.eq24.lap_ratio, amb, Theorem::Warped41ii, opts);
  if (want(Check::Classify)) rec.classify = classify_equality(pt, n1, tol.classifier);
  if (want(Check::Theta))
    for (int k = 2; k <= n1 + n2; ++k) rec.theta[k] = theta_k(R, k, seed).value;
  return rec;
}

std::vector<std::string> failed_checks(const PointRecord& rec, const std::vector<Check>& checks, const Tolerances& tol) {
  std::vector<std::string> out;
  if (!(rec.trace_residual <= tol.trace)) out.push_back("trace");
  for (Check c : checks) {
    bool ok = true;
    switch (c) {
      case Check::Gauss: ok = rec.gauss_residual <= tol.gauss; break;
      case Check::Eq24: ok = rec.eq24.identity_residual <= tol.eq24; break;
      case Check::Lemma31: ok = !rec.lemma31 || rec.lemma31->residual <= tol.lemma31; break;
      case Check::Chen13: ok = !rec.chen13 || rec.chen13->slack >= -tol.slack; break;
      case Check::Chen41i: ok = !rec.chen41i || rec.chen41i->slack >= -tol.slack; break;
      case Check::Chen41ii: ok = !rec.chen41ii || rec.chen41ii->slack >= -tol.slack; break;
      case Check::Classify:
        for (const auto* r : {&rec.chen41i, &rec.chen41ii})
          if (*r && (*r)->equality && !(*r)->minimality_consequence.value_or(false)) ok = false;
        break;
      case Check::Theta: break;
    }
    if (!ok) out.push_back(check_name(c));
  }
  return out;
}

Scene resolve_scene(const std::string& source) {
  constexpr std::string_view prefix = "catalog:";
  if (source.starts_with(prefix)) return catalog(source.substr(prefix.size()));
  return load_scene(source);
}

AnalyzeOutcome run_analyze(const Scene& scene) {
  validate_scene(scene);
  const WarpedChart chart = WarpedChart::build(scene.chart);
  const auto points = scene_points(scene);
  const auto coords = scene.coords();
  const Tolerances& tol = scene.tolerances;

  json records = json::array();
  std::map<std::string, double> min_slack, max_residual;
  std::map<std::string, int> equality_hits;
  std::vector<std::string> failures;
  const auto track_max = [&](const std::string& key, double v) {
    auto [it, fresh] = max_residual.emplace(key, v);
    if (!fresh) it->second = std::max(it->second, v);
  };
  const auto track_ineq = [&](const char* key, const std::optional<InequalityReport>& r) {
    if (!r) return;
    auto [it, fresh] = min_slack.emplace(key, r->slack);
    if (!fresh) it->second = std::min(it->second, r->slack);
    equality_hits[key] += r->equality ? 1 : 0;
  };

  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointRecord rec = analyze_point(chart, points[i], scene.checks, tol, scene.seed);
    records.push_back(point_json(i, coords, rec, scene.checks, tol));
    track_max("trace", rec.trace_residual);
    if (wants(scene.checks, Check::Gauss)) track_max("gauss", rec.gauss_residual);
    if (wants(scene.checks, Check::Eq24)) track_max("eq24", rec.eq24.identity_residual);
    if (rec.lemma31) track_max("lemma31", rec.lemma31->residual);
    track_ineq("chen13", rec.chen13);
    track_ineq("chen41i", rec.chen41i);
    track_ineq("chen41ii", rec.chen41ii);
    for (const auto& f : failed_checks(rec, scene.checks, tol)) failures.push_back(std::to_string(i) + ":" + f);
  }

  json summary;
  summary["points"] = points.size();
  summary["min_slack"] = min_slack;
  summary["max_residual"] = max_residual;
  summary["equality_hits"] = equality_hits;
  summary["failed"] = failures.size();
  summary["failures"] = failures;

  json report;
  report["version"] = kVersion;
  report["seed"] = scene.seed;
  report["scene"] = scene_json(scene);
  report["points"] = records;
  report["summary"] = summary;

  AnalyzeOutcome out;
  out.status = failures.empty() ? 0 : 2;
  out.report = report.dump(2) + "\n";
  return out;
}

const std::vector<std::string>& scan_header() {
  static const std::vector<std::string> cols = {
      "meanH2",       "h2",           "tau",           "tau_base",       "tau_fiber",      "delta",
      "delta_base",   "delta_fiber",  "inf_k",         "lap_ratio",      "slack_chen13",   "slack_chen41i",
      "slack_chen41ii", "gauss_residual", "eq24_residual", "trace_residual"};
  return cols;
}

ScanOutcome run_scan(const Scene& scene) {
  validate_scene(scene);
  if (!scene.grid) throw InputError("scan needs a grid");
  const WarpedChart chart = WarpedChart::build(scene.chart);
  const auto points = grid_points(scene.chart.domain, *scene.grid);
  if (points.empty()) throw InputError("grid is empty");

  std::string csv = "index";
  for (const auto& c : scene.coords()) csv += "," + c;
  for (const auto& c : scan_header()) csv += "," + c;
  csv += "\n";

  bool failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointRecord rec = analyze_point(chart, points[i], scene.checks, scene.tolerances, scene.seed, true);
    failed = failed || !failed_checks(rec, scene.checks, scene.tolerances).empty();
    std::vector<std::string> cells;
    cells.push_back(std::to_string(i));
    for (double x : rec.u) cells.push_back(csv_number(x));
    const auto opt = [](bool present, double v) { return present ? csv_number(v) : std::string(); };
    cells.push_back(csv_number(rec.meanH2));
    cells.push_back(csv_number(rec.h2));
    cells.push_back(csv_number(rec.tau));
    cells.push_back(csv_number(rec.tau_base));
    cells.push_back(csv_number(rec.tau_fiber));
    cells.push_back(opt(rec.chen13.has_value(), rec.chen13 ? rec.chen13->delta_form_lhs.value_or(0.0) : 0.0));
    cells.push_back(opt(rec.chen41i.has_value(), rec.chen41i ? rec.chen41i->lhs : 0.0));
    cells.push_back(opt(rec.chen41ii.has_value(), rec.chen41ii ? rec.chen41ii->lhs : 0.0));
    cells.push_back(opt(rec.chen13.has_value(), rec.chen13 ? rec.chen13->lhs : 0.0));
    cells.push_back(csv_number(rec.eq24.lap_ratio));
    cells.push_back(opt(rec.chen13.has_value(), rec.chen13 ? rec.chen13->slack : 0.0));
    cells.push_back(opt(rec.chen41i.has_value(), rec.chen41i ? rec.chen41i->slack : 0.0));
    cells.push_back(opt(rec.chen41ii.has_value(), rec.chen41ii ? rec.chen41ii->slack : 0.0));
    cells.push_back(csv_number(rec.gauss_residual));
    cells.push_back(csv_number(rec.eq24.identity_residual));
    cells.push_back(csv_number(rec.trace_residual));
    for (std::size_t k = 0; k < cells.size(); ++k) csv += (k ? "," : "") + cells[k];
    csv += "\n";
  }
  return {failed ? 2 : 0, csv};
}

int run_identities(int count, std::uint64_t seed, std::ostream& out) {
  if (count < 1) throw InputError("--random needs a positive count");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick_n(2, 8);
  bool ok = true;

  // Lemma on 2 a1 a2 >= beta: generic instances and instances built on the equality set.
  int holds = 0, iff = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    LemmaInstance inst;
    const int n = pick_n(rng);
    inst.alphas.resize(n);
    for (auto& a : inst.alphas) a = normal(rng);
    if (i % 2 == 1)
      for (int k = 2; k < n; ++k) inst.alphas[k] = inst.alphas[0] + inst.alphas[1];
    inst.beta = lemma_beta(inst.alphas);
    const LemmaCheck chk = check_lemma(inst);
    holds += chk.holds ? 1 : 0;
    iff += (chk.equality == chk.condition_matches) ? 1 : 0;
    min_gap = std::min(min_gap, chk.gap);
  }
  const bool lemma_ok = holds == count && iff == count;
  ok = ok && lemma_ok;
  char line[256];
  std::snprintf(line, sizeof line, "pair-bound        %d instances  holds %d  equality<=>condition %d  min gap %.3e  %s\n",
                count, holds, iff, min_gap, lemma_ok ? "ok" : "FAILED");
  out << line;

  // Rearrangement identities over random symmetric coefficient tensors.
  std::uniform_int_distribution<int> pick_dim(3, 8), pick_q(1, 4);
  double worst32 = 0.0, worst33 = 0.0;
  int with33 = 0;
  for (int i = 0; i < count; ++i) {
    const int n = pick_dim(rng);
    const int q = pick_q(rng);
    const int n1 = std::uniform_int_distribution<int>(std::min(3, n - 1), n - 1)(rng);
    ShapeCoefficients h(q, n);
    for (int r = 0; r < q; ++r)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) h.set(r, a, b, normal(rng));
    const auto res = rearrangement_identities(h, n1);
    worst32 = std::max(worst32, res.res32 / std::max({1.0, std::abs(res.lhs32), std::abs(res.rhs32)}));
    if (res.res33) {
      ++with33;
      worst33 = std::max(worst33, *res.res33 / std::max({1.0, std::abs(*res.lhs33), std::abs(*res.rhs33)}));
    }
  }
  const bool r32 = worst32 <= 1e-12, r33 = worst33 <= 1e-12;
  ok = ok && r32 && r33;
  std::snprintf(line, sizeof line, "rearrange-full    %d tensors  max relative residual %.3e  %s\n", count, worst32,
                r32 ? "ok" : "FAILED");
  out << line;
  std::snprintf(line, sizeof line, "rearrange-blocks  %d tensors  max relative residual %.3e  %s\n", with33, worst33,
                r33 ? "ok" : "FAILED");
  out << line;
  return ok ? 0 : 2;
}

}  // namespace warpchen
