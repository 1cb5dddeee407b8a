#pragma once

// Per-point orchestration behind the analyze and scan commands.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpchen/chen.hpp"
#include "warpchen/scene.hpp"

namespace warpchen {

inline constexpr const char* kVersion = "0.1.0";

struct PointRecord {
  std::vector<double> u;
  double meanH2 = 0.0;
  double h2 = 0.0;
  double tau = 0.0;
  double tau_base = 0.0;
  double tau_fiber = 0.0;
  double trace_residual = 0.0;
  double gauss_residual = 0.0;
  WarpLaplacian eq24;
  std::optional<DMinimalIdentity> lemma31;  // empty when the point is not D-minimal
  std::optional<InequalityReport> chen13, chen41i, chen41ii;
  std::optional<EqualityDiagnostics> classify;
  std::map<int, double> theta;
};

// Computes every invariant needed by `checks`; with `everything` set, all
// admissible quantities are computed regardless of the check list.
PointRecord analyze_point(const WarpedChart& chart, const std::vector<double>& u, const std::vector<Check>& checks,
                          const Tolerances& tol, std::uint64_t seed, bool everything = false);

// Resolves "catalog:NAME" or a file path.
Scene resolve_scene(const std::string& source);

struct AnalyzeOutcome {
  int status = 0;
  std::string report;  // JSON text, empty on input errors
};

AnalyzeOutcome run_analyze(const Scene& scene);

struct ScanOutcome {
  int status = 0;
  std::string csv;
};

ScanOutcome run_scan(const Scene& scene);
const std::vector<std::string>& scan_header();

// Names of the requested checks that fail at this point, plus "trace".
std::vector<std::string> failed_checks(const PointRecord& rec, const std::vector<Check>& checks, const Tolerances& tol);

// Randomized suites for the algebraic lemmas; prints one line per suite.
int run_identities(int count, std::uint64_t seed, std::ostream& out);

}  // namespace warpchen
