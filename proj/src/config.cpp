// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "seqinfer/errors.hpp"

namespace seqinfer {

using nlohmann::json;

namespace {

void allow_only(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (auto key : keys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown field \"" + k + "\"");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field \"" + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

VarianceMode variance_mode(const std::string& name, const std::string& where) {
  if (name == "known") return VarianceMode::KnownUnit;
  if (name == "estimated") return VarianceMode::Estimated;
  throw ConfigError(where + ": expected \"known\" or \"estimated\"");
}

BoundaryFunction parse_boundary(const json& node) {
  std::string name;
  double delta = 0.5;
  if (node.is_string()) {
    name = node.get<std::string>();
  } else {
    allow_only(node, {"name", "delta"}, "scenario.g");
    name = get<std::string>(node, "name", "scenario.g");
    delta = get_or<double>(node, "delta", delta, "scenario.g");
  }
  if (name == "quadratic") return BoundaryFunction::quadratic();
  if (name == "smoothed_absolute") {
    if (!(delta > 0.0)) throw ConfigError("scenario.g.delta: must be > 0");
    return BoundaryFunction::smoothed_absolute(delta);
  }
  if (name == "studentized") return BoundaryFunction::studentized();
  throw ConfigError("scenario.g: unknown boundary \"" + name + "\"");
}

Scenario scenario_from_json(const json& node) {
  const std::string where = "scenario";
  allow_only(node, {"g", "a", "n0", "n1", "map", "monitoring", "variance", "bootstrap_variance"}, where);
  if (!node.contains("g")) throw ConfigError("scenario: missing field \"g\"");
  auto g = parse_boundary(node.at("g"));

  const auto map_name = get_or<std::string>(node, "map", "identity", where);
  ObservationMap map = ObservationMap::identity();
  if (map_name == "square") {
    map = ObservationMap::square();
  } else if (map_name != "identity") {
    throw ConfigError("scenario.map: expected \"identity\" or \"square\"");
  }

  const auto monitoring_name = get_or<std::string>(node, "monitoring", "from_minimum", where);
  Monitoring monitoring = Monitoring::FromMinimum;
  if (monitoring_name == "first_passage") {
    monitoring = Monitoring::FirstPassage;
  } else if (monitoring_name != "from_minimum") {
    throw ConfigError("scenario.monitoring: expected \"from_minimum\" or \"first_passage\"");
  }

  const VarianceMode variance = variance_mode(
      get_or<std::string>(node, "variance", map.kind() == ObservationMap::Kind::Square ? "estimated" : "known", where),
      "scenario.variance");
  const VarianceMode bootstrap_variance =
      variance_mode(get_or<std::string>(node, "bootstrap_variance", "estimated", where), "scenario.bootstrap_variance");
  if (map.kind() == ObservationMap::Kind::Square &&
      (variance == VarianceMode::KnownUnit || bootstrap_variance == VarianceMode::KnownUnit)) {
    throw ConfigError("scenario: the square map needs estimated variance");
  }

  const double a = get<double>(node, "a", where);
  const int n0 = get<int>(node, "n0", where);
  const int n1 = get<int>(node, "n1", where);
  if (g.dim() != map.dim()) throw ConfigError("scenario: boundary dimension does not match the observation map");
  try {
    return Scenario{StoppingRule(std::move(g), a, n0, n1, monitoring), map, variance, bootstrap_variance};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

PopulationSpec population_from_json(const json& node, const std::string& where) {
  allow_only(node, {"variant", "sigma"}, where);
  const auto variant = get<std::string>(node, "variant", where);
  PopulationSpec spec;
  if (variant == "normal") {
    spec.family = PopulationSpec::Family::Normal;
    spec.sigma = get_or<double>(node, "sigma", 1.0, where);
    if (!(spec.sigma >= 0.0)) throw ConfigError(where + ".sigma: must be >= 0");
  } else if (variant == "mixture") {
    if (node.contains("sigma")) throw ConfigError(where + ".sigma: the mixture has unit variance");
    spec.family = PopulationSpec::Family::Mixture;
  } else {
    throw ConfigError(where + ".variant: expected \"normal\" or \"mixture\"");
  }
  return spec;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Population PopulationSpec::at(double mu) const {
  return family == Family::Normal ? Population::normal(mu, sigma) : Population::mixture(mu);
}

void ExperimentConfig::validate() const {
  if (n_sims < 1) throw ConfigError("n_sims must be >= 1");
  if (B < 1) throw ConfigError("B must be >= 1");
  if (exact_B < 1) throw ConfigError("exact_B must be >= 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
  if (grid.points < 3 || grid.points % 2 == 0) throw ConfigError("grid.points must be odd and >= 3");
  if (!(grid.width_factor > 0.0)) throw ConfigError("grid.width_factor must be > 0");
  if (grid.refine_steps < 0) throw ConfigError("grid.refine_steps must be >= 0");
  if (scenario.map.dim() != scenario.rule.dim()) throw ConfigError("scenario dimensions disagree");
  const bool known = scenario.variance == VarianceMode::KnownUnit;
  const bool scalar = scenario.map.dim() == 1;
  for (Method m : methods) {
    const auto name = std::string(method_name(m));
    switch (m) {
      case Method::Exact:
      case Method::Hybrid:
      case Method::NormalR:
        if (!known || !scalar) throw ConfigError("method " + name + " needs known unit variance and the identity map");
        break;
      case Method::TR0:
      case Method::TR1:
        if (known) throw ConfigError("method " + name + " needs estimated variance");
        break;
      default:
        break;
    }
  }
  if (!delta_sweep.empty() && scenario.rule.g().name() != "smoothed_absolute") {
    throw ConfigError("delta_sweep needs the smoothed_absolute boundary");
  }
  for (double d : delta_sweep)
    if (!(d > 0.0)) throw ConfigError("delta_sweep values must be > 0");
}

void apply_fast_profile(ExperimentConfig& config) {
  config.n_sims = 2000;
  config.B = 500;
  config.exact_B = 500;
  config.grid.points = 61;
}

ExperimentConfig parse_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  allow_only(root, {"scenario", "population", "exact_family", "mu_list", "methods", "alpha", "n_sims", "B",
                    "exact_B", "seed", "grid", "delta_sweep", "profile"},
             "config");
  ExperimentConfig cfg;
  if (!root.contains("scenario")) throw ConfigError("config: missing field \"scenario\"");
  cfg.scenario = scenario_from_json(root.at("scenario"));
  if (!root.contains("population")) throw ConfigError("config: missing field \"population\"");
  cfg.population = population_from_json(root.at("population"), "population");
  if (root.contains("exact_family")) cfg.exact_family = population_from_json(root.at("exact_family"), "exact_family");

  cfg.mu_list = get<std::vector<double>>(root, "mu_list", "config");
  if (cfg.mu_list.empty()) throw ConfigError("config.mu_list: must not be empty");
  for (const auto& name : get_or<std::vector<std::string>>(root, "methods", {}, "config")) {
    const auto m = parse_method(name);
    if (!m) throw ConfigError("config.methods: unknown method \"" + name + "\"");
    cfg.methods.push_back(*m);
  }
  cfg.alpha = get_or<double>(root, "alpha", cfg.alpha, "config");
  cfg.n_sims = get_or<int>(root, "n_sims", cfg.n_sims, "config");
  cfg.B = get_or<int>(root, "B", cfg.B, "config");
  cfg.exact_B = get_or<int>(root, "exact_B", cfg.exact_B, "config");
  cfg.seed = get_or<std::uint64_t>(root, "seed", cfg.seed, "config");
  cfg.delta_sweep = get_or<std::vector<double>>(root, "delta_sweep", {}, "config");

  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    allow_only(g, {"points", "width_factor", "refine_steps"}, "grid");
    cfg.grid.points = get_or<int>(g, "points", cfg.grid.points, "grid");
    cfg.grid.width_factor = get_or<double>(g, "width_factor", cfg.grid.width_factor, "grid");
    cfg.grid.refine_steps = get_or<int>(g, "refine_steps", cfg.grid.refine_steps, "grid");
  }

  const auto profile = get_or<std::string>(root, "profile", "full", "config");
  if (profile == "fast") {
    apply_fast_profile(cfg);
  } else if (profile != "full") {
    throw ConfigError("config.profile: expected \"full\" or \"fast\"");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

Scenario parse_scenario(std::string_view json_text) { return scenario_from_json(parse_json(json_text)); }

Scenario resolve_scenario(std::string_view name_or_path) {
  const std::string s(name_or_path);
  if (s == "rst") return Scenario{};
  if (s == "studentized_rst") {
    return Scenario{presets::studentized_repeated_significance_test(), ObservationMap::square(),
                    VarianceMode::Estimated, VarianceMode::Estimated};
  }
  if (s.rfind("smoothed_absolute", 0) == 0) {
    double delta = 0.5;
    if (s.size() > 17) {
      if (s[17] != ':') throw ConfigError("rule: expected smoothed_absolute[:delta]");
      try {
        delta = std::stod(s.substr(18));
      } catch (const std::exception&) {
        throw ConfigError("rule: bad delta in \"" + s + "\"");
      }
      if (!(delta > 0.0)) throw ConfigError("rule: delta must be > 0");
    }
    return Scenario{presets::smoothed_absolute_test(delta), ObservationMap::identity(), VarianceMode::KnownUnit,
                    VarianceMode::Estimated};
  }
  if (!std::filesystem::exists(s)) throw ConfigError("rule: \"" + s + "\" is neither a preset nor a file");
  return parse_scenario(read_file(s));
}

}  // namespace seqinfer
