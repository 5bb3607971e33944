#include "fmplan/cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>

#include "fmplan/pipeline.hpp"
#include "fmplan/svg.hpp"

namespace fmplan {

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "override a config key, e.g. --set transition.sigma_p=1.2");
  cmd->add_option("--out", c.out, "output directory (default: output_dir from the config)");
}

std::filesystem::path out_dir(const Common& c, const RunConfig& cfg) {
  return c.out.empty() ? cfg.output_dir : std::filesystem::path(c.out);
}

std::vector<VehicleState> starts_for(const RunConfig& cfg, const std::string& seed_states) {
  if (seed_states.empty()) {
    if (cfg.starts.empty()) throw ConfigError("no start states: give --seed-states or starts in the config");
    return cfg.starts;
  }
  std::ifstream in(seed_states);
  if (!in) throw ConfigError("cannot open " + seed_states);
  try {
    std::vector<VehicleState> s = read_start_states(in);
    if (s.empty()) throw ConfigError(seed_states + " holds no start states");
    return s;
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

struct Loaded {
  CompleteMap complete;
  VectorField field;
  GoalCells goals;
};

// Stage files from a gen-field run, checked against the config.
Loaded load_fields(const RunConfig& cfg, const std::filesystem::path& dir) {
  CompleteMap m = load_complete_map(dir / StageFiles::kCompleteMap);
  VectorField f = load_field(dir / StageFiles::kFieldSmoothed);
  if (m.width() != f.width() || m.height() != f.height()) {
    throw InputError("complete map and smoothed field dimensions differ");
  }
  if (m.resolution() != cfg.resolution || f.resolution() != cfg.resolution) {
    throw InputError("stage files were generated at resolution " + format_double(m.resolution()) +
                     " m but the config asks for " + format_double(cfg.resolution) + " m");
  }
  if (m.alpha() != cfg.alpha || m.r_min() != cfg.r_min) {
    throw InputError("stage files were generated with different alpha or r_min");
  }
  GoalCells goals = goal_cells(cfg, m.width(), m.height());
  for (const Cell& c : goals.cells) {
    if (m.at(c) != CellClass::Goal) throw InputError("stage files do not mark the configured goal cells");
  }
  return {std::move(m), std::move(f), std::move(goals)};
}

bool all_reached(const std::vector<RunRecord>& runs) {
  for (const RunRecord& r : runs) {
    if (r.trajectory.outcome != Outcome::GoalReached) return false;
  }
  return true;
}

void report(std::ostream& out, const std::vector<RunRecord>& runs) {
  const Json s = summarize(runs);
  out << s["runs"].get<std::size_t>() << " runs:";
  for (const auto& [name, n] : s["outcomes"].items()) out << ' ' << name << '=' << n.get<int>();
  out << '\n';
}

std::vector<Trajectory> load_run_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("trajectory_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Trajectory> out;
  for (const auto& p : files) out.push_back(load_trajectory(p));
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feedback motion plans for bounded-curvature vehicles on occupancy grids"};
  app.require_subcommand(1);

  Common gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-field", "write every planning stage for a config");
  add_common(gen_cmd, gen);

  Common sim;
  std::string sim_fields;
  std::string sim_seeds;
  bool sim_require = false;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "closed-loop runs on stored stage files");
  add_common(sim_cmd, sim);
  sim_cmd->add_option("--fields", sim_fields, "directory holding gen-field output (default: --out)");
  sim_cmd->add_option("--seed-states", sim_seeds, "CSV of x,y,theta start states");
  sim_cmd->add_flag("--require-goal", sim_require, "exit 4 unless every run reaches the goal");

  Common sweep;
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::vector<double> sweep_sigmas;
  std::string sweep_seeds;
  bool sweep_require = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "regenerate and simulate for each parameter value");
  add_common(sweep_cmd, sweep);
  sweep_cmd->add_option("--param", sweep_param, "sigma or resolution")
      ->required()
      ->check(CLI::IsMember({"sigma", "resolution"}));
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--paired-sigma", sweep_sigmas, "sigma per resolution value")->delimiter(',');
  sweep_cmd->add_option("--seed-states", sweep_seeds, "CSV of x,y,theta start states");
  sweep_cmd->add_flag("--require-goal", sweep_require, "exit 4 unless every run reaches the goal");

  Common met;
  std::string met_fields;
  std::string met_traj;
  CLI::App* met_cmd = app.add_subcommand("metrics", "recompute metrics for a stored trajectory");
  add_common(met_cmd, met);
  met_cmd->add_option("--fields", met_fields, "directory holding gen-field output (default: --out)");
  met_cmd->add_option("--trajectory", met_traj, "trajectory CSV")->required()->check(CLI::ExistingFile);

  Common plot;
  std::string plot_fields;
  std::string plot_runs;
  int plot_stride = 2;
  CLI::App* plot_cmd = app.add_subcommand("plot", "SVG of the smoothed field and stored trajectories");
  add_common(plot_cmd, plot);
  plot_cmd->add_option("--fields", plot_fields, "directory holding gen-field output (default: --out)");
  plot_cmd->add_option("--runs", plot_runs, "directory holding simulate output")->check(CLI::ExistingDirectory);
  plot_cmd->add_option("--stride", plot_stride, "cells between field arrows")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  Common* common = gen_cmd->parsed()     ? &gen
                   : sim_cmd->parsed()   ? &sim
                   : sweep_cmd->parsed() ? &sweep
                   : met_cmd->parsed()   ? &met
                                         : &plot;
  try {
    cfg = load_config(common->config, common->overrides);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path dir = out_dir(*common, cfg);

  try {
    if (gen_cmd->parsed()) {
      const Stages s = generate_stages(cfg);
      write_stages(s, cfg, dir);
      for (const VectorField* f : {&s.raw, &s.transition, &s.smoothed}) {
        for (const std::string& w : f->warnings()) err << "warning: " << w << '\n';
      }
      for (const std::string& w : s.cost.warnings()) err << "warning: " << w << '\n';
      out << "wrote stages to " << dir.string() << '\n';
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      std::vector<VehicleState> starts;
      try {
        starts = starts_for(cfg, sim_seeds);
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
      }
      const Loaded l = load_fields(cfg, sim_fields.empty() ? dir : std::filesystem::path(sim_fields));
      const GoalSpec goal = goal_spec(cfg, l.goals, cfg.resolution);
      const std::vector<RunRecord> runs = run_missions(cfg, l.complete, l.field, goal, starts);
      write_runs(runs, dir);
      report(out, runs);
      return sim_require && !all_reached(runs) ? kExitOutcome : kExitOk;
    }

    if (sweep_cmd->parsed()) {
      try {
        if (!sweep_seeds.empty() || cfg.starts.empty()) cfg.starts = starts_for(cfg, sweep_seeds);
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
      }
      const SweepParam param = sweep_param == "sigma" ? SweepParam::Sigma : SweepParam::Resolution;
      std::vector<SweepRow> rows;
      try {
        rows = run_sweep(cfg, param, sweep_values, sweep_sigmas);
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
      }
      write_sweep(rows, cfg, param, dir);
      bool failed = false;
      bool missed = false;
      for (const SweepRow& r : rows) {
        out << sweep_param << '=' << format_double(r.value) << ": ";
        if (!r.error.empty()) {
          out << "error: " << r.error << '\n';
          failed = true;
          continue;
        }
        report(out, r.runs);
        missed = missed || !all_reached(r.runs);
      }
      if (failed) return kExitPipeline;
      return sweep_require && missed ? kExitOutcome : kExitOk;
    }

    if (met_cmd->parsed()) {
      const Loaded l = load_fields(cfg, met_fields.empty() ? dir : std::filesystem::path(met_fields));
      const Trajectory t = load_trajectory(met_traj);
      const GoalSpec goal = goal_spec(cfg, l.goals, cfg.resolution);
      out << to_json(evaluate(t, l.complete, goal)).dump(2) << '\n';
      return kExitOk;
    }

    const Loaded l = load_fields(cfg, plot_fields.empty() ? dir : std::filesystem::path(plot_fields));
    std::vector<Trajectory> trajs;
    if (!plot_runs.empty()) trajs = load_run_dir(plot_runs);
    std::vector<svg::Overlay> overlays;
    for (std::size_t k = 0; k < trajs.size(); ++k) overlays.push_back({"run " + std::to_string(k), &trajs[k]});
    std::vector<PathState> reference;
    if (l.goals.kind == GoalKind::Path) reference = std::get<PathGoal>(goal_spec(cfg, l.goals, cfg.resolution)).states;
    std::filesystem::create_directories(dir);
    std::ofstream svg_out(dir / "field_smoothed.svg");
    if (!svg_out) throw Error("cannot write " + (dir / "field_smoothed.svg").string());
    svg_out << svg::map_plot(l.complete, overlays, reference, &l.field, plot_stride);
    out << "wrote " << (dir / "field_smoothed.svg").string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
}

}  // namespace fmplan
