#pragma once

// Scene files: a chart, the points to analyze and the checks to run on them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpchen/immersion.hpp"

namespace warpchen {

enum class Check { Gauss, Eq24, Lemma31, Chen13, Chen41i, Chen41ii, Classify, Theta };

const char* check_name(Check c);
Check parse_check(const std::string& name);  // InputError on unknown names

struct Tolerances {
  double gauss = 1e-7;
  double eq24 = 1e-7;
  double trace = 1e-8;
  double lemma31 = 1e-8;
  double slack = 1e-6;
  double equality = 1e-7;
  double classifier = 1e-6;

  // key is one of the field names above
  void set(const std::string& key, double value);
  std::map<std::string, double> as_map() const;
};

struct GridSpec {
  std::vector<int> counts;  // one per chart coordinate, base first
  double margin = 0.05;
};

struct Scene {
  std::string name;
  ChartSpec chart;
  std::vector<std::vector<double>> points;
  std::optional<GridSpec> grid;
  std::vector<Check> checks;  // sorted, no duplicates
  Tolerances tolerances;
  std::uint64_t seed = 20240917;

  std::vector<std::string> coords() const;
};

Scene parse_scene(const std::string& yaml_text);
Scene load_scene(const std::string& path);
std::string scene_to_yaml(const Scene& scene, const std::vector<std::string>& comments = {});

// Requested checks must be admissible for the chart dimensions and at least
// one point must be given. Throws InputError.
void validate_scene(const Scene& scene);

// Lexicographic, first coordinate slowest. A count of 1 takes the midpoint.
std::vector<std::vector<double>> grid_points(const std::vector<Interval>& domain, const GridSpec& grid);

// Explicit points first, then the grid.
std::vector<std::vector<double>> scene_points(const Scene& scene);

}  // namespace warpchen
