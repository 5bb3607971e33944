// End-to-end wiring: bitmap -> complete map -> cost map -> raw field ->
// transition field -> smoothed field, then closed-loop runs and sweeps.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fmplan/config.hpp"
#include "fmplan/field.hpp"
#include "fmplan/metrics.hpp"
#include "fmplan/wavefront.hpp"

namespace fmplan {

/// A pipeline failure tagged with the stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage \"" + stage + "\": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Stages {
  OccupancyBitmap bitmap;
  GoalCells goals;
  CompleteMap complete;
  CostMap cost;
  VectorField raw;
  EdgeSet path;  // empty for single-goal missions
  EdgeSet border;
  VectorField transition;
  VectorField smoothed;
};

/// The configured bitmap at the planning resolution.
OccupancyBitmap load_world(const RunConfig& cfg);

GoalCells goal_cells(const RunConfig& cfg, int width, int height);

Stages generate_stages(const RunConfig& cfg, const OccupancyBitmap& world, Exec exec = Exec::Parallel);
Stages generate_stages(const RunConfig& cfg, Exec exec = Exec::Parallel);

GoalSpec goal_spec(const RunConfig& cfg, const GoalCells& goals, double resolution);

/// Stage file names inside an output directory.
struct StageFiles {
  static constexpr const char* kCompleteMap = "complete_map.csv";
  static constexpr const char* kCostMap = "cost_map.csv";
  static constexpr const char* kFieldRaw = "field_raw.csv";
  static constexpr const char* kFieldTransition = "field_transition.csv";
  static constexpr const char* kFieldSmoothed = "field_smoothed.csv";
};

void write_stages(const Stages& s, const RunConfig& cfg, const std::filesystem::path& dir);

struct RunRecord {
  VehicleState start;
  Trajectory trajectory;
  MetricsReport metrics;
};

std::vector<RunRecord> run_missions(const RunConfig& cfg, const CompleteMap& m, const VectorField& field,
                                    const GoalSpec& goal, const std::vector<VehicleState>& starts,
                                    Exec exec = Exec::Parallel);

/// Counts per outcome plus per-run rows.
Json summarize(const std::vector<RunRecord>& runs);

/// trajectory_NNN.csv/.json, metrics_NNN.json and summary.json.
void write_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& dir);

enum class SweepParam { Sigma, Resolution };

struct SweepRow {
  double value = 0.0;
  double sigma = 0.0;
  double resolution = 0.0;
  std::optional<Stages> stages;
  std::vector<RunRecord> runs;
  std::string error;  // non-empty when this value failed
};

/// Regenerates the plan and simulates every start for each value. A
/// resolution sweep takes sigma from `paired_sigmas` (same length as values)
/// when given. Failures are kept per row.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, SweepParam param, const std::vector<double>& values,
                                const std::vector<double>& paired_sigmas = {}, Exec exec = Exec::Parallel);

/// sweep_table.csv plus paths.svg, heading.svg and (path missions)
/// cross_track.svg.
void write_sweep(const std::vector<SweepRow>& rows, const RunConfig& cfg, SweepParam param,
                 const std::filesystem::path& dir);

}  // namespace fmplan
