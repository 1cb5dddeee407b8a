#include "warpchen/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "warpchen/errors.hpp"

namespace warpchen {

namespace {

constexpr std::pair<Check, const char*> kCheckNames[] = {
    {Check::Gauss, "gauss"},       {Check::Eq24, "eq24"},         {Check::Lemma31, "lemma31"},
    {Check::Chen13, "chen13"},     {Check::Chen41i, "chen41i"},   {Check::Chen41ii, "chen41ii"},
    {Check::Classify, "classify"}, {Check::Theta, "theta"},
};

template <class T>
T read(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InputError("bad value for " + what);
  }
}

std::vector<std::string> read_names(const YAML::Node& node, const std::string& what) {
  if (!node) return {};
  if (node.IsScalar()) return {read<std::string>(node, what)};
  if (!node.IsSequence()) throw InputError(what + " must be a list");
  std::vector<std::string> out;
  for (const auto& item : node) out.push_back(read<std::string>(item, what));
  return out;
}

std::size_t coord_index(const std::vector<std::string>& coords, const std::string& name) {
  auto it = std::find(coords.begin(), coords.end(), name);
  if (it == coords.end()) throw InputError("unknown coordinate '" + name + "'");
  return static_cast<std::size_t>(it - coords.begin());
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw InputError("unknown key '" + key + "' in " + where);
  }
}

ChartSpec read_chart(const YAML::Node& node) {
  if (!node || !node.IsMap()) throw InputError("scene needs a 'chart' section");
  check_keys(node, {"base", "fiber", "warp", "ambient", "components", "domain"}, "chart");
  ChartSpec spec;
  spec.base_coords = read_names(node["base"], "chart.base");
  spec.fiber_coords = read_names(node["fiber"], "chart.fiber");
  if (!node["warp"]) throw InputError("chart.warp is required");
  spec.warp = read<std::string>(node["warp"], "chart.warp");
  spec.components = read_names(node["components"], "chart.components");

  const auto amb = node["ambient"];
  if (!amb || !amb.IsMap()) throw InputError("chart.ambient is required");
  check_keys(amb, {"kind", "c", "m"}, "chart.ambient");
  try {
    spec.ambient.kind = parse_ambient_kind(read<std::string>(amb["kind"], "chart.ambient.kind"));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  spec.ambient.c = amb["c"] ? read<double>(amb["c"], "chart.ambient.c") : 0.0;
  spec.ambient.m = read<int>(amb["m"], "chart.ambient.m");

  std::vector<std::string> coords = spec.base_coords;
  coords.insert(coords.end(), spec.fiber_coords.begin(), spec.fiber_coords.end());
  const auto dom = node["domain"];
  if (!dom || !dom.IsMap()) throw InputError("chart.domain must map each coordinate to [lo, hi]");
  spec.domain.assign(coords.size(), Interval{});
  std::vector<bool> seen(coords.size(), false);
  for (const auto& kv : dom) {
    const auto name = kv.first.as<std::string>();
    const auto i = coord_index(coords, name);
    const auto bounds = read<std::vector<double>>(kv.second, "chart.domain." + name);
    if (bounds.size() != 2) throw InputError("chart.domain." + name + " must be [lo, hi]");
    spec.domain[i] = {bounds[0], bounds[1]};
    seen[i] = true;
  }
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (!seen[i]) throw InputError("chart.domain misses coordinate '" + coords[i] + "'");
  return spec;
}

}  // namespace

const char* check_name(Check c) {
  for (const auto& [k, name] : kCheckNames)
    if (k == c) return name;
  return "?";
}

Check parse_check(const std::string& name) {
  for (const auto& [k, n] : kCheckNames)
    if (name == n) return k;
  throw InputError("unknown check '" + name + "'");
}

void Tolerances::set(const std::string& key, double value) {
  if (!(value >= 0.0)) throw InputError("tolerance '" + key + "' must be a nonnegative number");
  if (key == "gauss") gauss = value;
  else if (key == "eq24") eq24 = value;
  else if (key == "trace") trace = value;
  else if (key == "lemma31") lemma31 = value;
  else if (key == "slack") slack = value;
  else if (key == "equality") equality = value;
  else if (key == "classifier") classifier = value;
  else throw InputError("unknown tolerance '" + key + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  return {{"classifier", classifier}, {"eq24", eq24},   {"equality", equality}, {"gauss", gauss},
          {"lemma31", lemma31},       {"slack", slack}, {"trace", trace}};
}

std::vector<std::string> Scene::coords() const {
  auto out = chart.base_coords;
  out.insert(out.end(), chart.fiber_coords.begin(), chart.fiber_coords.end());
  return out;
}

Scene parse_scene(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("scene is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw InputError("scene must be a mapping");
  check_keys(root, {"name", "chart", "points", "grid", "checks", "tolerances", "seed"}, "scene");

  Scene scene;
  if (root["name"]) scene.name = read<std::string>(root["name"], "name");
  scene.chart = read_chart(root["chart"]);
  const auto coords = scene.coords();

  if (const auto pts = root["points"]) {
    if (!pts.IsSequence()) throw InputError("points must be a list");
    for (const auto& p : pts) {
      if (!p.IsMap()) throw InputError("each point maps coordinates to values");
      std::vector<double> u(coords.size(), 0.0);
      std::vector<bool> seen(coords.size(), false);
      for (const auto& kv : p) {
        const auto name = kv.first.as<std::string>();
        const auto i = coord_index(coords, name);
        u[i] = read<double>(kv.second, "point coordinate " + name);
        seen[i] = true;
      }
      for (std::size_t i = 0; i < coords.size(); ++i)
        if (!seen[i]) throw InputError("point misses coordinate '" + coords[i] + "'");
      scene.points.push_back(std::move(u));
    }
  }

  if (const auto g = root["grid"]) {
    if (!g.IsMap()) throw InputError("grid must be a mapping");
    check_keys(g, {"counts", "margin"}, "grid");
    GridSpec grid;
    grid.counts.assign(coords.size(), 1);
    if (const auto counts = g["counts"]) {
      if (!counts.IsMap()) throw InputError("grid.counts maps coordinates to counts");
      for (const auto& kv : counts) {
        const auto name = kv.first.as<std::string>();
        grid.counts[coord_index(coords, name)] = read<int>(kv.second, "grid.counts." + name);
      }
    }
    if (g["margin"]) grid.margin = read<double>(g["margin"], "grid.margin");
    scene.grid = grid;
  }

  std::set<Check> checks;
  for (const auto& name : read_names(root["checks"], "checks")) checks.insert(parse_check(name));
  scene.checks.assign(checks.begin(), checks.end());

  if (const auto t = root["tolerances"]) {
    if (!t.IsMap()) throw InputError("tolerances must be a mapping");
    for (const auto& kv : t) {
      const auto key = kv.first.as<std::string>();
      scene.tolerances.set(key, read<double>(kv.second, "tolerances." + key));
    }
  }
  if (root["seed"]) scene.seed = read<std::uint64_t>(root["seed"], "seed");
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scene file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

std::string scene_to_yaml(const Scene& scene, const std::vector<std::string>& comments) {
  const auto coords = scene.coords();
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  for (const auto& line : comments) out << YAML::Comment(line) << YAML::Newline;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << scene.name;
  out << YAML::Key << "chart" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "base" << YAML::Value << YAML::Flow << scene.chart.base_coords;
  out << YAML::Key << "fiber" << YAML::Value << YAML::Flow << scene.chart.fiber_coords;
  out << YAML::Key << "warp" << YAML::Value << YAML::DoubleQuoted << scene.chart.warp;
  out << YAML::Key << "ambient" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << ambient_kind_name(scene.chart.ambient.kind);
  out << YAML::Key << "c" << YAML::Value << scene.chart.ambient.c;
  out << YAML::Key << "m" << YAML::Value << scene.chart.ambient.m;
  out << YAML::EndMap;
  out << YAML::Key << "components" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : scene.chart.components) out << YAML::DoubleQuoted << c;
  out << YAML::EndSeq;
  out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out << YAML::Key << coords[i] << YAML::Value << YAML::Flow << YAML::BeginSeq << scene.chart.domain[i].lo
        << scene.chart.domain[i].hi << YAML::EndSeq;
  }
  out << YAML::EndMap << YAML::EndMap;

  if (!scene.points.empty()) {
    out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : scene.points) {
      out << YAML::Flow << YAML::BeginMap;
      for (std::size_t i = 0; i < coords.size(); ++i) out << YAML::Key << coords[i] << YAML::Value << p[i];
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (scene.grid) {
    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "counts" << YAML::Value << YAML::Flow << YAML::BeginMap;
    for (std::size_t i = 0; i < coords.size(); ++i)
      out << YAML::Key << coords[i] << YAML::Value << scene.grid->counts[i];
    out << YAML::EndMap;
    out << YAML::Key << "margin" << YAML::Value << scene.grid->margin;
    out << YAML::EndMap;
  }
  out << YAML::Key << "checks" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Check c : scene.checks) out << check_name(c);
  out << YAML::EndSeq;
  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : scene.tolerances.as_map()) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << scene.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void validate_scene(const Scene& scene) {
  const auto n1 = scene.chart.base_coords.size();
  const auto n2 = scene.chart.fiber_coords.size();
  const auto has = [&](Check c) { return std::find(scene.checks.begin(), scene.checks.end(), c) != scene.checks.end(); };
  if (has(Check::Chen41i) && n1 < 2) throw InputError("case i requires n₁ ≥ 2");
  if (has(Check::Chen41ii) && n2 < 2) throw InputError("case ii requires n₂ ≥ 2");
  if (scene.grid) {
    if (scene.grid->counts.size() != n1 + n2) throw InputError("grid counts do not match the chart");
    for (int c : scene.grid->counts)
      if (c < 1) throw InputError("grid is empty");
    if (!(scene.grid->margin >= 0.0 && scene.grid->margin < 0.5)) throw InputError("grid margin must lie in [0, 0.5)");
  }
  if (scene.points.empty() && !scene.grid) throw InputError("scene has no points and no grid");
}

std::vector<std::vector<double>> grid_points(const std::vector<Interval>& domain, const GridSpec& grid) {
  const std::size_t d = domain.size();
  std::vector<std::vector<double>> axes(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const int k = grid.counts[i];
    if (k < 1) throw InputError("grid is empty");
    const double w = domain[i].hi - domain[i].lo;
    if (k == 1) {
      axes[i] = {domain[i].lo + 0.5 * w};
    } else {
      const double lo = domain[i].lo + grid.margin * w;
      const double hi = domain[i].hi - grid.margin * w;
      for (int j = 0; j < k; ++j) axes[i].push_back(lo + (hi - lo) * j / (k - 1));
    }
    total *= axes[i].size();
  }
  std::vector<std::vector<double>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::vector<double> u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = axes[i][idx[i]];
    out.push_back(std::move(u));
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<std::vector<double>> scene_points(const Scene& scene) {
  auto out = scene.points;
  if (scene.grid) {
    auto g = grid_points(scene.chart.domain, *scene.grid);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

}  // namespace warpchen
