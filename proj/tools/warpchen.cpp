// warpchen: analyze, scan, catalog and identities commands.
//
// Exit status: 0 when every requested check passes, 2 when some check fails,
// 1 on bad input.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warpchen/analysis.hpp"
#include "warpchen/catalog.hpp"
#include "warpchen/errors.hpp"

namespace {

void apply_overrides(warpchen::Scene& scene, const std::vector<std::string>& tols, const std::uint64_t* seed) {
  for (const auto& kv : tols) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw warpchen::InputError("--tol expects key=value, got '" + kv + "'");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::logic_error&) {
      throw warpchen::InputError("--tol value is not a number: '" + kv + "'");
    }
    scene.tolerances.set(kv.substr(0, eq), v);
  }
  if (seed) scene.seed = *seed;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw warpchen::InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Chen's first inequality on warped-product submanifolds"};
  app.require_subcommand(1);

  std::string scene_src, out_path, csv_path, show_name;
  std::vector<std::string> tols;
  std::uint64_t seed = 0;
  int random_count = 0;

  auto* analyze = app.add_subcommand("analyze", "Analyze the points of a scene and write a JSON report");
  analyze->add_option("scene", scene_src, "Scene file or catalog:NAME")->required();
  analyze->add_option("--out", out_path, "Report path (stdout when omitted)");
  analyze->add_option("--tol", tols, "Tolerance override key=value")->expected(1, -1);
  auto* seed_opt = analyze->add_option("--seed", seed, "Seed of the plane samplers");

  auto* scan = app.add_subcommand("scan", "Evaluate the scene grid and write CSV rows");
  scan->add_option("scene", scene_src, "Scene file or catalog:NAME")->required();
  scan->add_option("--csv", csv_path, "CSV output path")->required();

  auto* cat = app.add_subcommand("catalog", "List or show built-in scenes");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "List catalog entries");
  auto* cat_show = cat->add_subcommand("show", "Print a catalog scene as YAML");
  cat_show->add_option("name", show_name)->required();

  auto* ids = app.add_subcommand("identities", "Randomized suites for the algebraic lemmas");
  ids->add_option("--random", random_count, "Instances per suite")->required();
  auto* ids_seed = ids->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze) {
      auto scene = warpchen::resolve_scene(scene_src);
      apply_overrides(scene, tols, seed_opt->count() ? &seed : nullptr);
      const auto res = warpchen::run_analyze(scene);
      if (out_path.empty())
        std::cout << res.report;
      else
        write_file(out_path, res.report);
      return res.status;
    }
    if (*scan) {
      const auto res = warpchen::run_scan(warpchen::resolve_scene(scene_src));
      write_file(csv_path, res.csv);
      return res.status;
    }
    if (*cat_list) {
      for (const auto& e : warpchen::catalog_entries()) std::cout << e.name << "  " << e.summary << "\n";
      return 0;
    }
    if (*cat_show) {
      const auto& e = warpchen::catalog_entry(show_name);
      std::vector<std::string> comments{e.summary};
      for (const auto& line : e.expected) comments.push_back("expected: " + line);
      std::cout << warpchen::scene_to_yaml(e.scene, comments);
      return 0;
    }
    if (*ids) {
      const std::uint64_t s = ids_seed->count() ? seed : warpchen::kDefaultSeed;
      return warpchen::run_identities(random_count, s, std::cout);
    }
  } catch (const warpchen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
