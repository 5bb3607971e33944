// File formats for every pipeline stage.
//
//   complete map   CSV of {0, 1, -1, 2}            + JSON {resolution, alpha, r_min}
//   cost map       CSV of reals | OBS | BUF | UNR  + JSON {resolution}
//   vector field   CSV of angles (rad)             + JSON {resolution, stage, sigma, params, flagged}
//   trajectory     CSV t,x,y,theta,omega_cmd       + JSON summary {outcome, t_final, metrics}
//
// CSV rows are grid rows j = 0..h-1; reals use the shortest round-trip form.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fmplan/field.hpp"
#include "fmplan/gridmap.hpp"
#include "fmplan/metrics.hpp"
#include "fmplan/sim.hpp"
#include "fmplan/wavefront.hpp"

namespace fmplan {

using Json = nlohmann::ordered_json;

std::string format_double(double v);
double parse_double(std::string_view text, const std::string& context);

void write_complete_map_csv(std::ostream& out, const CompleteMap& m);
Json complete_map_sidecar(const CompleteMap& m);
CompleteMap read_complete_map(std::istream& csv, const Json& sidecar);

void write_cost_map_csv(std::ostream& out, const CostMap& cm);
Json cost_map_sidecar(const CostMap& cm);
CostMap read_cost_map(std::istream& csv, const Json& sidecar);

struct FieldMeta {
  FieldStage stage = FieldStage::Raw;
  std::optional<double> sigma;
  std::optional<TransitionParams> params;
};

const char* to_string(FieldStage stage);
FieldStage parse_field_stage(const std::string& text);

void write_field_csv(std::ostream& out, const VectorField& f);
Json field_sidecar(const VectorField& f, const FieldMeta& meta);
VectorField read_field(std::istream& csv, const Json& sidecar);
FieldMeta read_field_meta(const Json& sidecar);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Samples and commands from CSV; dt, v, integrator and outcome from the summary.
Trajectory read_trajectory(std::istream& csv, const Json& summary);
Json trajectory_summary(const Trajectory& traj, const MetricsReport& metrics);

Json to_json(const MetricsReport& r);
MetricsReport metrics_from_json(const Json& j);

Outcome parse_outcome(const std::string& text);
const char* to_string(Integrator integrator);
Integrator parse_integrator(const std::string& text);

// File helpers. `csv_path` names the CSV; the sidecar sits next to it with a
// .json extension.
void save_complete_map(const std::filesystem::path& csv_path, const CompleteMap& m);
CompleteMap load_complete_map(const std::filesystem::path& csv_path);
void save_cost_map(const std::filesystem::path& csv_path, const CostMap& cm);
CostMap load_cost_map(const std::filesystem::path& csv_path);
void save_field(const std::filesystem::path& csv_path, const VectorField& f, const FieldMeta& meta);
VectorField load_field(const std::filesystem::path& csv_path);
void save_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj,
                     const MetricsReport& metrics);
Trajectory load_trajectory(const std::filesystem::path& csv_path);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace fmplan
