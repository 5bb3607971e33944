#include "fmplan/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "fmplan/error.hpp"

namespace fmplan {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

namespace {

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

CsvTable read_csv(std::istream& in, const std::string& what, bool skip_header = false) {
  CsvTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (skip_header && line_no == 1) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!t.rows.empty() && fields.size() != t.rows.front().size()) {
      throw ParseError(what + ": dimension mismatch at line " + std::to_string(line_no));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (t.rows.empty()) throw ParseError(what + ": no rows");
  return t;
}

std::string at_line(const std::string& what, const CsvTable& t, std::size_t row, std::size_t col) {
  return what + " line " + std::to_string(t.line_numbers[row]) + ", column " + std::to_string(col + 1);
}

void require_dims(const Json& sidecar, int w, int h, const std::string& what) {
  if (sidecar.contains("width") && sidecar.at("width").get<int>() != w) {
    throw ParseError(what + ": width disagrees with sidecar");
  }
  if (sidecar.contains("height") && sidecar.at("height").get<int>() != h) {
    throw ParseError(what + ": height disagrees with sidecar");
  }
}

}  // namespace

void write_complete_map_csv(std::ostream& out, const CompleteMap& m) {
  for (int j = 0; j < m.height(); ++j) {
    for (int i = 0; i < m.width(); ++i) {
      if (i) out << ',';
      out << static_cast<int>(m.at(i, j));
    }
    out << '\n';
  }
}

Json complete_map_sidecar(const CompleteMap& m) {
  return Json{{"resolution", m.resolution()},
              {"alpha", m.alpha()},
              {"r_min", m.r_min()},
              {"width", m.width()},
              {"height", m.height()}};
}

CompleteMap read_complete_map(std::istream& csv, const Json& sidecar) {
  const CsvTable t = read_csv(csv, "complete map");
  const int h = static_cast<int>(t.rows.size());
  const int w = static_cast<int>(t.rows.front().size());
  require_dims(sidecar, w, h, "complete map");
  Grid<CellClass> cells(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const std::string& v = t.rows[j][i];
      if (v == "0") {
        cells(i, j) = CellClass::Free;
      } else if (v == "1") {
        cells(i, j) = CellClass::Obstacle;
      } else if (v == "-1") {
        cells(i, j) = CellClass::Buffer;
      } else if (v == "2") {
        cells(i, j) = CellClass::Goal;
      } else {
        throw ParseError(at_line("complete map", t, j, i) + ": unknown class '" + v + "'");
      }
    }
  }
  return CompleteMap(std::move(cells), sidecar.at("resolution").get<double>(),
                     sidecar.at("alpha").get<double>(), sidecar.at("r_min").get<double>());
}

void write_cost_map_csv(std::ostream& out, const CostMap& cm) {
  for (int j = 0; j < cm.height(); ++j) {
    for (int i = 0; i < cm.width(); ++i) {
      if (i) out << ',';
      switch (cm.kind(i, j)) {
        case CostKind::Finite:
          out << format_double(cm.cost(i, j));
          break;
        case CostKind::Obstacle:
          out << "OBS";
          break;
        case CostKind::Buffer:
          out << "BUF";
          break;
        case CostKind::Unreachable:
          out << "UNR";
          break;
      }
    }
    out << '\n';
  }
}

Json cost_map_sidecar(const CostMap& cm) {
  return Json{{"resolution", cm.resolution()}, {"width", cm.width()}, {"height", cm.height()}};
}

CostMap read_cost_map(std::istream& csv, const Json& sidecar) {
  const CsvTable t = read_csv(csv, "cost map");
  const int h = static_cast<int>(t.rows.size());
  const int w = static_cast<int>(t.rows.front().size());
  require_dims(sidecar, w, h, "cost map");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Grid<double> costs(w, h, inf);
  Grid<CostKind> kinds(w, h, CostKind::Unreachable);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const std::string& v = t.rows[j][i];
      if (v == "OBS") {
        kinds(i, j) = CostKind::Obstacle;
      } else if (v == "BUF") {
        kinds(i, j) = CostKind::Buffer;
      } else if (v == "UNR") {
        kinds(i, j) = CostKind::Unreachable;
      } else {
        kinds(i, j) = CostKind::Finite;
        costs(i, j) = parse_double(v, at_line("cost map", t, j, i));
      }
    }
  }
  return CostMap(std::move(costs), std::move(kinds), sidecar.at("resolution").get<double>());
}

const char* to_string(FieldStage stage) {
  switch (stage) {
    case FieldStage::Raw:
      return "raw";
    case FieldStage::Transition:
      return "transition";
    case FieldStage::Smoothed:
      return "smoothed";
  }
  return "raw";
}

FieldStage parse_field_stage(const std::string& text) {
  if (text == "raw") return FieldStage::Raw;
  if (text == "transition") return FieldStage::Transition;
  if (text == "smoothed") return FieldStage::Smoothed;
  throw ParseError("unknown field stage '" + text + "'");
}

void write_field_csv(std::ostream& out, const VectorField& f) {
  for (int j = 0; j < f.height(); ++j) {
    for (int i = 0; i < f.width(); ++i) {
      if (i) out << ',';
      out << format_double(f.angle(i, j));
    }
    out << '\n';
  }
}

Json field_sidecar(const VectorField& f, const FieldMeta& meta) {
  Json j{{"resolution", f.resolution()},
         {"width", f.width()},
         {"height", f.height()},
         {"stage", to_string(meta.stage)}};
  j["sigma"] = meta.sigma ? Json(*meta.sigma) : Json(nullptr);
  if (meta.params) {
    j["params"] = Json{{"mu_p", meta.params->mu_p},
                       {"sigma_p", meta.params->sigma_p},
                       {"mu_b", meta.params->mu_b},
                       {"sigma_b", meta.params->sigma_b},
                       {"r_min", meta.params->r_min}};
  } else {
    j["params"] = nullptr;
  }
  Json flagged = Json::array();
  for (std::size_t k = 0; k < f.flags().size(); ++k) {
    if (f.flags()[k]) {
      const Cell c = f.flags().cell(k);
      flagged.push_back(Json::array({c.i, c.j}));
    }
  }
  j["flagged"] = std::move(flagged);
  return j;
}

FieldMeta read_field_meta(const Json& sidecar) {
  FieldMeta meta;
  meta.stage = parse_field_stage(sidecar.value("stage", std::string("raw")));
  if (sidecar.contains("sigma") && !sidecar.at("sigma").is_null()) meta.sigma = sidecar.at("sigma").get<double>();
  if (sidecar.contains("params") && !sidecar.at("params").is_null()) {
    const Json& p = sidecar.at("params");
    TransitionParams tp;
    tp.mu_p = p.at("mu_p").get<double>();
    tp.sigma_p = p.at("sigma_p").get<double>();
    tp.mu_b = p.at("mu_b").get<double>();
    tp.sigma_b = p.at("sigma_b").get<double>();
    tp.r_min = p.at("r_min").get<double>();
    meta.params = tp;
  }
  return meta;
}

VectorField read_field(std::istream& csv, const Json& sidecar) {
  const CsvTable t = read_csv(csv, "vector field");
  const int h = static_cast<int>(t.rows.size());
  const int w = static_cast<int>(t.rows.front().size());
  require_dims(sidecar, w, h, "vector field");
  Grid<double> angles(w, h, 0.0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) angles(i, j) = parse_double(t.rows[j][i], at_line("vector field", t, j, i));
  }
  Grid<std::uint8_t> flags(w, h, 0);
  if (sidecar.contains("flagged")) {
    for (const Json& c : sidecar.at("flagged")) {
      const Cell cell{c.at(0).get<int>(), c.at(1).get<int>()};
      if (!flags.contains(cell)) throw ParseError("vector field: flagged cell out of bounds");
      flags(cell) = 1;
    }
  }
  return VectorField(std::move(angles), sidecar.at("resolution").get<double>(), std::move(flags));
}

const char* to_string(Integrator integrator) { return integrator == Integrator::Euler ? "euler" : "rk4"; }

Integrator parse_integrator(const std::string& text) {
  if (text == "euler" || text == "Euler") return Integrator::Euler;
  if (text == "rk4" || text == "RK4") return Integrator::RK4;
  throw ParseError("unknown integrator '" + text + "'");
}

Outcome parse_outcome(const std::string& text) {
  for (Outcome o : {Outcome::GoalReached, Outcome::Timeout, Outcome::Collision, Outcome::OutOfBounds}) {
    if (text == to_string(o)) return o;
  }
  throw ParseError("unknown outcome '" + text + "'");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,theta,omega_cmd\n";
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const VehicleState& s = traj.samples[k];
    out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << format_double(s.theta) << ',';
    if (k < traj.commands.size()) out << format_double(traj.commands[k]);
    out << '\n';
  }
}

Trajectory read_trajectory(std::istream& csv, const Json& summary) {
  const CsvTable t = read_csv(csv, "trajectory", true);
  Trajectory traj;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != 5) throw ParseError(at_line("trajectory", t, r, 0) + ": expected 5 columns");
    VehicleState s;
    s.t = parse_double(row[0], at_line("trajectory", t, r, 0));
    s.x = parse_double(row[1], at_line("trajectory", t, r, 1));
    s.y = parse_double(row[2], at_line("trajectory", t, r, 2));
    s.theta = parse_double(row[3], at_line("trajectory", t, r, 3));
    traj.samples.push_back(s);
    if (!row[4].empty()) traj.commands.push_back(parse_double(row[4], at_line("trajectory", t, r, 4)));
  }
  traj.outcome = parse_outcome(summary.at("outcome").get<std::string>());
  traj.dt = summary.at("dt").get<double>();
  traj.v = summary.at("v").get<double>();
  traj.integrator = parse_integrator(summary.at("integrator").get<std::string>());
  traj.entered_flagged = summary.value("entered_flagged", false);
  return traj;
}

Json to_json(const MetricsReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"heading_total_variation", r.heading_total_variation},
              {"oscillation_count", r.oscillation_count},
              {"mean_cross_track", opt(r.mean_cross_track)},
              {"max_cross_track", opt(r.max_cross_track)},
              {"time_to_goal", opt(r.time_to_goal)},
              {"path_length", r.path_length},
              {"buffer_dwell_fraction", r.buffer_dwell_fraction}};
}

MetricsReport metrics_from_json(const Json& j) {
  auto opt = [&j](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  MetricsReport r;
  r.heading_total_variation = j.at("heading_total_variation").get<double>();
  r.oscillation_count = j.at("oscillation_count").get<int>();
  r.mean_cross_track = opt("mean_cross_track");
  r.max_cross_track = opt("max_cross_track");
  r.time_to_goal = opt("time_to_goal");
  r.path_length = j.at("path_length").get<double>();
  r.buffer_dwell_fraction = j.value("buffer_dwell_fraction", 0.0);
  return r;
}

Json trajectory_summary(const Trajectory& traj, const MetricsReport& metrics) {
  return Json{{"outcome", to_string(traj.outcome)},
              {"t_final", traj.samples.empty() ? 0.0 : traj.samples.back().t},
              {"dt", traj.dt},
              {"v", traj.v},
              {"integrator", to_string(traj.integrator)},
              {"samples", traj.samples.size()},
              {"entered_flagged", traj.entered_flagged},
              {"metrics", to_json(metrics)}};
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

void save_complete_map(const std::filesystem::path& csv_path, const CompleteMap& m) {
  auto out = open_out(csv_path);
  write_complete_map_csv(out, m);
  write_json_file(sidecar_path(csv_path), complete_map_sidecar(m));
}

CompleteMap load_complete_map(const std::filesystem::path& csv_path) {
  auto in = open_in(csv_path);
  return read_complete_map(in, read_json_file(sidecar_path(csv_path)));
}

void save_cost_map(const std::filesystem::path& csv_path, const CostMap& cm) {
  auto out = open_out(csv_path);
  write_cost_map_csv(out, cm);
  write_json_file(sidecar_path(csv_path), cost_map_sidecar(cm));
}

CostMap load_cost_map(const std::filesystem::path& csv_path) {
  auto in = open_in(csv_path);
  return read_cost_map(in, read_json_file(sidecar_path(csv_path)));
}

void save_field(const std::filesystem::path& csv_path, const VectorField& f, const FieldMeta& meta) {
  auto out = open_out(csv_path);
  write_field_csv(out, f);
  write_json_file(sidecar_path(csv_path), field_sidecar(f, meta));
}

VectorField load_field(const std::filesystem::path& csv_path) {
  auto in = open_in(csv_path);
  return read_field(in, read_json_file(sidecar_path(csv_path)));
}

void save_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj,
                     const MetricsReport& metrics) {
  auto out = open_out(csv_path);
  write_trajectory_csv(out, traj);
  write_json_file(sidecar_path(csv_path), trajectory_summary(traj, metrics));
}

Trajectory load_trajectory(const std::filesystem::path& csv_path) {
  auto in = open_in(csv_path);
  return read_trajectory(in, read_json_file(sidecar_path(csv_path)));
}

}  // namespace fmplan
