#include "fmplan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fmplan/svg.hpp"

namespace fmplan {

namespace {

Cell containing_cell(Point p, double res, int width, int height, const char* what) {
  const int i = static_cast<int>(std::floor(p.x / res));
  const int j = static_cast<int>(std::floor(p.y / res));
  if (i < 0 || j < 0 || i >= width || j >= height) {
    std::ostringstream os;
    os << what << " (" << p.x << ", " << p.y << ") lies outside the " << width * res << " x " << height * res
       << " m workspace";
    throw InputError(os.str());
  }
  return {i, j};
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string run_name(const char* stem, std::size_t k, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu%s", stem, k, ext);
  return buf;
}

}  // namespace

OccupancyBitmap load_world(const RunConfig& cfg) {
  return stage("bitmap", [&] {
    OccupancyBitmap bm = load_bitmap_file(cfg.map.path, cfg.map.resolution);
    if (cfg.resolution == cfg.map.resolution) return bm;
    return resample(bm, cfg.resolution);
  });
}

GoalCells goal_cells(const RunConfig& cfg, int width, int height) {
  GoalCells goals;
  if (const auto* single = std::get_if<SingleGoalMission>(&cfg.mission)) {
    goals.kind = GoalKind::SingleGoal;
    goals.cells.push_back(containing_cell(single->goal, cfg.resolution, width, height, "goal"));
  } else {
    std::vector<Cell> wp;
    for (const Point& p : std::get<PathMission>(cfg.mission).waypoints) {
      wp.push_back(containing_cell(p, cfg.resolution, width, height, "waypoint"));
    }
    goals = rasterize_path(wp);
  }
  goals.validate(width, height);
  return goals;
}

Stages generate_stages(const RunConfig& cfg, const OccupancyBitmap& world, Exec exec) {
  GoalCells goals = stage("goals", [&] { return goal_cells(cfg, world.width(), world.height()); });
  CompleteMap complete =
      stage("complete_map", [&] { return generate_complete_map(world, goals, cfg.alpha, cfg.r_min, exec); });
  CostMap cost = stage("cost_map", [&] { return expand_wavefront(complete, exec); });
  VectorField raw = stage("field_raw", [&] { return raw_field(cost, complete, goals, exec); });
  EdgeSet path{EdgeKind::Path, {}};
  EdgeSet border{EdgeKind::Border, {}};
  VectorField transition = stage("field_transition", [&] {
    if (goals.kind == GoalKind::Path) path = path_edges(goals);
    border = border_edges(complete, cost, raw);
    return transition_field(raw, path, border, cfg.transition, exec);
  });
  VectorField smoothed = stage("field_smoothed", [&] { return smooth_field(transition, cfg.gaussian_sigma, exec); });
  return Stages{world,
                std::move(goals),
                std::move(complete),
                std::move(cost),
                std::move(raw),
                std::move(path),
                std::move(border),
                std::move(transition),
                std::move(smoothed)};
}

Stages generate_stages(const RunConfig& cfg, Exec exec) { return generate_stages(cfg, load_world(cfg), exec); }

GoalSpec goal_spec(const RunConfig& cfg, const GoalCells& goals, double resolution) {
  if (const auto* single = std::get_if<SingleGoalMission>(&cfg.mission)) {
    // the goal disc is centred on the goal cell the plan converges to
    return SingleGoal{cell_center(goals.cells.front(), resolution), single->beta};
  }
  const auto& path = std::get<PathMission>(cfg.mission);
  return path_goal_from(path_edges(goals), resolution, path.delta_x, path.delta_y, path.delta_theta);
}

void write_stages(const Stages& s, const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_complete_map(dir / StageFiles::kCompleteMap, s.complete);
  save_cost_map(dir / StageFiles::kCostMap, s.cost);
  save_field(dir / StageFiles::kFieldRaw, s.raw, FieldMeta{FieldStage::Raw, std::nullopt, std::nullopt});
  save_field(dir / StageFiles::kFieldTransition, s.transition,
             FieldMeta{FieldStage::Transition, std::nullopt, cfg.transition});
  save_field(dir / StageFiles::kFieldSmoothed, s.smoothed,
             FieldMeta{FieldStage::Smoothed, cfg.gaussian_sigma, cfg.transition});
  write_json_file(dir / "config.json", to_json(cfg));
}

std::vector<RunRecord> run_missions(const RunConfig& cfg, const CompleteMap& m, const VectorField& field,
                                    const GoalSpec& goal, const std::vector<VehicleState>& starts, Exec exec) {
  if (m.width() != field.width() || m.height() != field.height() || m.resolution() != field.resolution()) {
    throw InputError("field and complete map disagree in dimensions or resolution");
  }
  std::vector<Trajectory> trajs = simulate_batch(starts, m, field, cfg.plan_params(), goal, cfg.sim_options(), exec);
  std::vector<RunRecord> runs(trajs.size());
  const long n = static_cast<long>(trajs.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long k = 0; k < n; ++k) {
    runs[k].start = starts[k];
    runs[k].metrics = evaluate(trajs[k], m, goal);
    runs[k].trajectory = std::move(trajs[k]);
  }
  return runs;
}

Json summarize(const std::vector<RunRecord>& runs) {
  std::map<std::string, int> counts;
  for (Outcome o : {Outcome::GoalReached, Outcome::Timeout, Outcome::Collision, Outcome::OutOfBounds}) {
    counts[to_string(o)] = 0;
  }
  Json rows = Json::array();
  int flagged = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Trajectory& t = runs[k].trajectory;
    ++counts[to_string(t.outcome)];
    if (t.entered_flagged) ++flagged;
    rows.push_back(Json{{"run", k},
                        {"start", Json::array({runs[k].start.x, runs[k].start.y, runs[k].start.theta})},
                        {"outcome", to_string(t.outcome)},
                        {"t_final", t.samples.empty() ? 0.0 : t.samples.back().t},
                        {"entered_flagged", t.entered_flagged},
                        {"metrics", to_json(runs[k].metrics)}});
  }
  Json out;
  out["runs"] = runs.size();
  Json c = Json::object();
  for (const auto& [name, n] : counts) c[name] = n;
  out["outcomes"] = c;
  out["entered_flagged"] = flagged;
  out["per_run"] = rows;
  return out;
}

void write_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    save_trajectory(dir / run_name("trajectory", k, ".csv"), runs[k].trajectory, runs[k].metrics);
    write_json_file(dir / run_name("metrics", k, ".json"), to_json(runs[k].metrics));
  }
  write_json_file(dir / "summary.json", summarize(runs));
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, SweepParam param, const std::vector<double>& values,
                                const std::vector<double>& paired_sigmas, Exec exec) {
  if (values.size() < 2) throw ConfigError("a sweep needs at least two values");
  if (!paired_sigmas.empty() && paired_sigmas.size() != values.size()) {
    throw ConfigError("paired sigmas must match the sweep values one to one");
  }
  // the source bitmap is shared; each row derives its own planning grid
  std::optional<OccupancyBitmap> source;
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < values.size(); ++k) {
    SweepRow row;
    row.value = values[k];
    RunConfig c = cfg;
    if (param == SweepParam::Sigma) {
      c.gaussian_sigma = values[k];
    } else {
      c.resolution = values[k];
      if (!paired_sigmas.empty()) c.gaussian_sigma = paired_sigmas[k];
    }
    row.sigma = c.gaussian_sigma;
    row.resolution = c.resolution;
    try {
      c.validate();
      if (!source) {
        source = stage("bitmap", [&] { return load_bitmap_file(cfg.map.path, cfg.map.resolution); });
      }
      OccupancyBitmap world = c.resolution == source->resolution() ? *source : resample(*source, c.resolution);
      Stages s = generate_stages(c, world, exec);
      const GoalSpec goal = goal_spec(c, s.goals, c.resolution);
      row.runs = run_missions(c, s.complete, s.smoothed, goal, c.starts, exec);
      row.stages = std::move(s);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

const char* param_name(SweepParam p) { return p == SweepParam::Sigma ? "sigma" : "resolution"; }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string row_label(const SweepRow& r) {
  std::ostringstream os;
  os << "sigma=" << format_double(r.sigma) << " res=" << format_double(r.resolution);
  return os.str();
}

}  // namespace

void write_sweep(const std::vector<SweepRow>& rows, const RunConfig& cfg, SweepParam param,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "sweep_table.csv");
    if (!out) throw Error("cannot write " + (dir / "sweep_table.csv").string());
    out << "param,value,sigma,resolution,run,outcome,heading_total_variation,oscillation_count,"
           "mean_cross_track,max_cross_track,time_to_goal,path_length,buffer_dwell_fraction,error\n";
    for (const SweepRow& r : rows) {
      const std::string head = std::string(param_name(param)) + ',' + format_double(r.value) + ',' +
                               format_double(r.sigma) + ',' + format_double(r.resolution) + ',';
      if (!r.error.empty()) {
        std::string msg = r.error;
        for (char& ch : msg) {
          if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        }
        out << head << ",,,,,,,,,," << msg << '\n';
        continue;
      }
      for (std::size_t k = 0; k < r.runs.size(); ++k) {
        const MetricsReport& m = r.runs[k].metrics;
        out << head << k << ',' << to_string(r.runs[k].trajectory.outcome) << ','
            << format_double(m.heading_total_variation) << ',' << m.oscillation_count << ','
            << opt(m.mean_cross_track) << ',' << opt(m.max_cross_track) << ',' << opt(m.time_to_goal) << ','
            << format_double(m.path_length) << ',' << format_double(m.buffer_dwell_fraction) << ",\n";
      }
    }
  }

  // background: the finest successful grid
  const SweepRow* base = nullptr;
  for (const SweepRow& r : rows) {
    if (r.stages && (!base || r.resolution < base->resolution)) base = &r;
  }
  std::vector<svg::Overlay> overlays;
  std::vector<svg::Series> heading;
  std::vector<svg::Series> xtrack;
  for (const SweepRow& r : rows) {
    for (std::size_t k = 0; k < r.runs.size(); ++k) {
      const Trajectory& t = r.runs[k].trajectory;
      std::string label = row_label(r);
      if (r.runs.size() > 1) label += " run " + std::to_string(k);
      overlays.push_back({label, &t});
      svg::Series h{label, {}};
      for (const VehicleState& s : t.samples) h.points.push_back({s.t, s.theta});
      heading.push_back(std::move(h));
      if (r.stages && r.stages->goals.kind == GoalKind::Path && t.samples.size() >= 2) {
        const GoalSpec g = goal_spec(cfg, r.stages->goals, r.resolution);
        const auto& states = std::get<PathGoal>(g).states;
        const CrossTrack ct = cross_track(t, states, 2.0 * r.resolution);
        svg::Series x{label, {}};
        for (std::size_t s = 0; s < t.samples.size(); ++s) x.points.push_back({t.samples[s].t, ct.series[s]});
        xtrack.push_back(std::move(x));
      }
    }
  }
  auto write_text = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  if (base) {
    std::vector<PathState> reference;
    if (base->stages->goals.kind == GoalKind::Path) {
      reference = std::get<PathGoal>(goal_spec(cfg, base->stages->goals, base->resolution)).states;
    }
    write_text("paths.svg", svg::map_plot(base->stages->complete, overlays, reference));
  }
  write_text("heading.svg", svg::line_chart("heading", "t [s]", "theta [rad]", heading));
  if (cfg.is_path()) write_text("cross_track.svg", svg::line_chart("cross-track error", "t [s]", "error [m]", xtrack));
}

}  // namespace fmplan
