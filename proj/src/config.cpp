#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbm/runner.hpp"

namespace qbm {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void unknown_key(const std::string& section, const std::string& key) {
  throw ConfigError("config: unknown key \"" + (section.empty() ? key : section + "." + key) +
                    '"');
}

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) { ok = true; break; }
    if (!ok) unknown_key(section, item.key());
  }
}

double get_number(const json& obj, const std::string& section, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("config: " + section + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& section, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("config: " + section + "." + key + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& section, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw ConfigError("config: " + section + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("config: " + section + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> get_list(const json& obj, const std::string& section, const char* key,
                             std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array())
    throw ConfigError("config: " + section + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ConfigError("config: " + section + "." + key + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

GridSpec get_grid(const json& obj, const std::string& section, const char* key,
                  GridSpec fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  const std::string path = section + "." + key;
  if (!v.is_object()) throw ConfigError("config: " + path + " must be an object");
  check_keys(v, path, {"min", "max", "points"});
  GridSpec g;
  g.lo = get_number(v, path, "min", fallback.lo);
  g.hi = get_number(v, path, "max", fallback.hi);
  g.points = get_int(v, path, "points", fallback.points);
  return g;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "",
             {"oscillator", "bath", "observable", "measurement", "sweep", "series", "output"});

  RunConfig c;
  const RunConfig defaults;
  c.t_grid = {0.0, 12.0 * 2.0 * 3.14159265358979323846, 600};
  c.x_grid = {-8.0, 8.0, 400};

  if (root.contains("oscillator")) {
    const json& o = root.at("oscillator");
    check_keys(o, "oscillator", {"mass", "omega0", "temperature", "hbar"});
    c.oscillator.mass = get_number(o, "oscillator", "mass", 1.0);
    c.oscillator.omega0 = get_number(o, "oscillator", "omega0", 1.0);
    c.oscillator.temperature = get_number(o, "oscillator", "temperature", 1.0);
    c.oscillator.hbar = get_number(o, "oscillator", "hbar", 1.0);
  }

  if (root.contains("bath")) {
    const json& b = root.at("bath");
    check_keys(b, "bath", {"kind", "drude_cutoff"});
    const std::string kind = get_string(b, "bath", "kind", "ohmic");
    if (kind == "none")
      c.bath_kind = BathKind::None;
    else if (kind == "ohmic")
      c.bath_kind = BathKind::Ohmic;
    else if (kind == "drude")
      c.bath_kind = BathKind::Drude;
    else
      throw ConfigError("config: bath.kind must be one of none, ohmic, drude");
    c.drude_cutoff = get_number(b, "bath", "drude_cutoff", defaults.drude_cutoff);
  }

  if (root.contains("observable")) {
    const json& v = root.at("observable");
    if (!v.is_string()) throw ConfigError("config: observable must be a string");
    const std::string s = v.get<std::string>();
    if (s == "position")
      c.observable = Observable::Position;
    else if (s == "momentum")
      c.observable = Observable::Momentum;
    else
      throw ConfigError("config: observable must be position or momentum");
  }

  if (root.contains("measurement")) {
    const json& m = root.at("measurement");
    check_keys(m, "measurement", {"sigma", "x0"});
    c.sigma = get_number(m, "measurement", "sigma", defaults.sigma);
    c.x0 = get_number(m, "measurement", "x0", defaults.x0);
  }

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    check_keys(s, "sweep",
               {"gamma", "mu", "include_unmonitored", "compare_drude", "t_grid", "x_grid"});
    c.gamma_list = get_list(s, "sweep", "gamma", {0.0, 0.2, 1.0});
    c.mu_list = get_list(s, "sweep", "mu", {2.0, 8.0});
    c.include_unmonitored = get_bool(s, "sweep", "include_unmonitored", false);
    c.compare_drude = get_bool(s, "sweep", "compare_drude", false);
    c.t_grid = get_grid(s, "sweep", "t_grid", c.t_grid);
    c.x_grid = get_grid(s, "sweep", "x_grid", c.x_grid);
  } else {
    c.gamma_list = {0.0, 0.2, 1.0};
    c.mu_list = {2.0, 8.0};
  }

  if (root.contains("series")) {
    const json& s = root.at("series");
    check_keys(s, "series", {"mode", "max_terms", "relative_tolerance"});
    const std::string mode = get_string(s, "series", "mode", "adaptive");
    if (mode == "fixed") {
      c.series = SeriesControl::fixed(get_int(s, "series", "max_terms", 2000));
      if (s.contains("relative_tolerance"))
        throw ConfigError("config: series.relative_tolerance is meaningless in fixed mode");
    } else if (mode == "adaptive") {
      c.series = SeriesControl::adaptive(
          get_number(s, "series", "relative_tolerance", 1e-10),
          get_int(s, "series", "max_terms", 20000));
    } else {
      throw ConfigError("config: series.mode must be fixed or adaptive");
    }
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"format", "path"});
    const std::string fmt = get_string(o, "output", "format", "csv");
    if (fmt == "csv")
      c.format = OutputFormat::Csv;
    else if (fmt == "json")
      c.format = OutputFormat::Json;
    else
      throw ConfigError("config: output.format must be csv or json");
    c.out_path = get_string(o, "output", "path", "");
  }

  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string save_config(const RunConfig& config) {
  json root;
  root["oscillator"] = {{"mass", config.oscillator.mass},
                        {"omega0", config.oscillator.omega0},
                        {"temperature", config.oscillator.temperature},
                        {"hbar", config.oscillator.hbar}};
  const char* kind = config.bath_kind == BathKind::None
                         ? "none"
                         : config.bath_kind == BathKind::Ohmic ? "ohmic" : "drude";
  root["bath"] = {{"kind", kind}, {"drude_cutoff", config.drude_cutoff}};
  root["observable"] = config.observable == Observable::Position ? "position" : "momentum";
  root["measurement"] = {{"sigma", config.sigma}, {"x0", config.x0}};
  root["sweep"] = {
      {"gamma", config.gamma_list},
      {"mu", config.mu_list},
      {"include_unmonitored", config.include_unmonitored},
      {"compare_drude", config.compare_drude},
      {"t_grid",
       {{"min", config.t_grid.lo}, {"max", config.t_grid.hi}, {"points", config.t_grid.points}}},
      {"x_grid",
       {{"min", config.x_grid.lo}, {"max", config.x_grid.hi}, {"points", config.x_grid.points}}}};
  if (config.series.mode == SeriesMode::FixedCount) {
    root["series"] = {{"mode", "fixed"}, {"max_terms", config.series.max_terms}};
  } else {
    root["series"] = {{"mode", "adaptive"},
                      {"max_terms", config.series.max_terms},
                      {"relative_tolerance", config.series.relative_tolerance}};
  }
  root["output"] = {{"format", config.format == OutputFormat::Csv ? "csv" : "json"},
                    {"path", config.out_path}};
  return root.dump(2) + "\n";
}

}  // namespace qbm
