#include "fmplan/config.hpp"

#include <fstream>
#include <sstream>

namespace fmplan {

PlanParams RunConfig::plan_params() const {
  PlanParams p;
  p.v = v;
  p.r_min = r_min;
  p.k_gain = k_gain;
  p.lookup = lookup;
  return p;
}

SimOptions RunConfig::sim_options() const {
  SimOptions o;
  o.dt = dt;
  o.t_max = t_max;
  o.integrator = integrator;
  o.goal_radius = goal_radius;
  return o;
}

void RunConfig::validate() const {
  try {
    if (!(map.resolution > 0.0)) throw ConstraintError("map.resolution must be positive");
    if (!(resolution > 0.0)) throw ConstraintError("resolution must be positive");
    buffer_width_cells(alpha, r_min, resolution);
    plan_params().validate();
    sim_options().validate();
    transition.validate();
    if (transition.r_min != r_min) throw ConstraintError("transition r_min must equal r_min");
    if (!(gaussian_sigma > 0.0)) throw ConstraintError("gaussian_sigma must be positive");
    if (const auto* single = std::get_if<SingleGoalMission>(&mission)) {
      if (!(single->beta >= 2.0)) throw ConstraintError("mission.beta must be >= 2");
    } else {
      const auto& path = std::get<PathMission>(mission);
      if (path.waypoints.size() < 2) throw ConstraintError("a path mission needs at least two waypoints");
      if (!(path.delta_x > 0.0 && path.delta_y > 0.0 && path.delta_theta > 0.0)) {
        throw ConstraintError("mission.deltas must be positive");
      }
    }
  } catch (const ConstraintError& e) {
    throw ConfigError(e.what());
  }
}

namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

Point read_point(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

LookupMode parse_lookup(const std::string& s) {
  if (s == "bilinear") return LookupMode::Bilinear;
  if (s == "nearest" || s == "nearest_cell") return LookupMode::NearestCell;
  throw ConfigError("unknown lookup_mode '" + s + "'");
}

GoalRadius parse_goal_radius(const std::string& s) {
  if (s == "radius") return GoalRadius::Radius;
  if (s == "as_printed") return GoalRadius::AsPrinted;
  throw ConfigError("unknown goal_radius_interpretation '" + s + "'");
}

}  // namespace

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    const Json& map = doc.at("map");
    std::filesystem::path p = map.at("path").get<std::string>();
    cfg.map.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    cfg.map.resolution = get_or(map, "resolution", cfg.map.resolution);
    cfg.resolution = get_or(doc, "resolution", cfg.map.resolution);

    const Json& mission = doc.at("mission");
    const std::string type = mission.at("type").get<std::string>();
    if (type == "single_goal") {
      SingleGoalMission m;
      if (mission.contains("goal_cell")) {
        const Point c = read_point(mission.at("goal_cell"), "mission.goal_cell");
        m.goal = cell_center({static_cast<int>(c.x), static_cast<int>(c.y)}, cfg.resolution);
      } else {
        m.goal = read_point(mission.at("goal"), "mission.goal");
      }
      m.beta = get_or(mission, "beta", m.beta);
      cfg.mission = m;
    } else if (type == "path") {
      PathMission m;
      if (mission.contains("waypoint_cells")) {
        for (const Json& c : mission.at("waypoint_cells")) {
          const Point pc = read_point(c, "mission.waypoint_cells[]");
          m.waypoints.push_back(cell_center({static_cast<int>(pc.x), static_cast<int>(pc.y)}, cfg.resolution));
        }
      } else {
        for (const Json& w : mission.at("waypoints")) m.waypoints.push_back(read_point(w, "mission.waypoints[]"));
      }
      if (mission.contains("deltas")) {
        const Json& d = mission.at("deltas");
        m.delta_x = get_or(d, "x", m.delta_x);
        m.delta_y = get_or(d, "y", m.delta_y);
        m.delta_theta = get_or(d, "theta", m.delta_theta);
      }
      cfg.mission = m;
    } else {
      throw ConfigError("mission.type must be single_goal or path, got '" + type + "'");
    }

    cfg.alpha = get_or(doc, "alpha", cfg.alpha);
    cfg.v = get_or(doc, "v", cfg.v);
    cfg.r_min = get_or(doc, "r_min", cfg.r_min);
    if (doc.contains("transition")) {
      const Json& t = doc.at("transition");
      cfg.transition.mu_p = get_or(t, "mu_p", cfg.transition.mu_p);
      cfg.transition.sigma_p = get_or(t, "sigma_p", cfg.transition.sigma_p);
      cfg.transition.mu_b = get_or(t, "mu_b", cfg.transition.mu_b);
      cfg.transition.sigma_b = get_or(t, "sigma_b", cfg.transition.sigma_b);
    }
    cfg.transition.r_min = cfg.r_min;
    cfg.gaussian_sigma = get_or(doc, "gaussian_sigma", cfg.gaussian_sigma);
    cfg.k_gain = get_or(doc, "k_gain", cfg.k_gain);
    cfg.dt = get_or(doc, "dt", cfg.dt);
    cfg.t_max = get_or(doc, "t_max", cfg.t_max);
    cfg.integrator = parse_integrator(get_or<std::string>(doc, "integrator", "rk4"));
    cfg.lookup = parse_lookup(get_or<std::string>(doc, "lookup_mode", "bilinear"));
    cfg.goal_radius = parse_goal_radius(get_or<std::string>(doc, "goal_radius_interpretation", "radius"));
    if (doc.contains("starts")) {
      for (const Json& s : doc.at("starts")) {
        if (!s.is_array() || s.size() != 3) throw ConfigError("starts[] must be [x, y, theta]");
        cfg.starts.push_back({s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>(), 0.0});
      }
    }
    cfg.output_dir = get_or<std::string>(doc, "output_dir", cfg.output_dir.string());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

void apply_overrides(Json& doc, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq);
    const std::string text = o.substr(eq + 1);
    Json value;
    try {
      value = Json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      value = text;
    }
    Json* node = &doc;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  apply_overrides(doc, overrides);
  return parse_config(doc, path.parent_path());
}

Json to_json(const RunConfig& cfg) {
  Json doc;
  doc["map"] = Json{{"path", cfg.map.path.string()}, {"resolution", cfg.map.resolution}};
  doc["resolution"] = cfg.resolution;
  if (const auto* single = std::get_if<SingleGoalMission>(&cfg.mission)) {
    doc["mission"] = Json{{"type", "single_goal"},
                          {"goal", Json::array({single->goal.x, single->goal.y})},
                          {"beta", single->beta}};
  } else {
    const auto& path = std::get<PathMission>(cfg.mission);
    Json wps = Json::array();
    for (const Point& p : path.waypoints) wps.push_back(Json::array({p.x, p.y}));
    doc["mission"] = Json{{"type", "path"},
                          {"waypoints", wps},
                          {"deltas", Json{{"x", path.delta_x}, {"y", path.delta_y}, {"theta", path.delta_theta}}}};
  }
  doc["alpha"] = cfg.alpha;
  doc["v"] = cfg.v;
  doc["r_min"] = cfg.r_min;
  doc["transition"] = Json{{"mu_p", cfg.transition.mu_p},
                           {"sigma_p", cfg.transition.sigma_p},
                           {"mu_b", cfg.transition.mu_b},
                           {"sigma_b", cfg.transition.sigma_b}};
  doc["gaussian_sigma"] = cfg.gaussian_sigma;
  doc["k_gain"] = cfg.k_gain;
  doc["dt"] = cfg.dt;
  doc["t_max"] = cfg.t_max;
  doc["integrator"] = to_string(cfg.integrator);
  doc["lookup_mode"] = cfg.lookup == LookupMode::Bilinear ? "bilinear" : "nearest";
  doc["goal_radius_interpretation"] = cfg.goal_radius == GoalRadius::Radius ? "radius" : "as_printed";
  Json starts = Json::array();
  for (const VehicleState& s : cfg.starts) starts.push_back(Json::array({s.x, s.y, s.theta}));
  doc["starts"] = starts;
  doc["output_dir"] = cfg.output_dir.string();
  return doc;
}

std::vector<VehicleState> read_start_states(std::istream& in) {
  std::vector<VehicleState> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3) throw ParseError("start states line " + std::to_string(line_no) + ": expected x,y,theta");
    if (line_no == 1 && fields[0].find_first_of("0123456789") == std::string::npos) continue;
    const std::string ctx = "start states line " + std::to_string(line_no);
    out.push_back({parse_double(fields[0], ctx), parse_double(fields[1], ctx), parse_double(fields[2], ctx), 0.0});
  }
  return out;
}

}  // namespace fmplan
