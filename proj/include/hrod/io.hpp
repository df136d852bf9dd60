#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrod/characteristics.hpp"
#include "hrod/criterion.hpp"
#include "hrod/initial_data.hpp"
#include "hrod/model.hpp"
#include "hrod/solver.hpp"

namespace hrod {

/// %.17g; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// Flat `key = value` lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_value_text(const std::string& text);
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);

/// Outcome of a run, stored next to its configuration in the manifest.
struct RunSummary {
  StopReason stop_reason = StopReason::ReachedTEnd;
  bool blew_up = false;
  std::optional<double> t_detected;
  std::optional<double> t_unresolved;
  std::size_t steps = 0;
  std::vector<SeriesPoint> energy_series;
  std::vector<SeriesPoint> min_slope_series;
  std::vector<double> snapshot_times;
  std::vector<std::string> snapshot_files;

  bool operator==(const RunSummary&) const = default;
};

/// Everything needed to reproduce a run, plus its recorded outcome.
struct RunManifest {
  std::string command = "simulate";
  std::string tag = "main";
  std::map<std::string, std::string> spec;  // spec_to_key_values form
  std::string spec_id;
  double half_length = 20.0;
  std::size_t n = 1024;
  SolverConfig solver;
  InitialData init;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::optional<RunSummary> summary;

  bool operator==(const RunManifest&) const = default;
};

void to_json(nlohmann::json& j, const SolverConfig& c);
void from_json(const nlohmann::json& j, SolverConfig& c);
void to_json(nlohmann::json& j, const InitialData& d);
void from_json(const nlohmann::json& j, InitialData& d);
void to_json(nlohmann::json& j, const RunSummary& s);
void from_json(const nlohmann::json& j, RunSummary& s);
void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);
void to_json(nlohmann::json& j, const CriterionReport& r);
void to_json(nlohmann::json& j, const SignPersistenceReport& r);
void to_json(nlohmann::json& j, const RiccatiReport& r);
void to_json(nlohmann::json& j, const ConvolutionCheck& c);

RunSummary summarize_run(const SimulationResult& result, const std::string& tag);

std::string snapshot_file_name(const std::string& tag, std::size_t index);
std::string manifest_file_name(const std::string& tag);

/// x,u,ux rows at 17 significant digits.
void write_snapshot_csv(const std::filesystem::path& path, const GridState& state);
GridState read_snapshot_csv(const std::filesystem::path& path, const Grid& grid, double t);

/// Writes all snapshots and the manifest (with summary) into `dir`.
RunManifest save_run(const std::filesystem::path& dir, RunManifest manifest,
                     const SimulationResult& result);

struct LoadedRun {
  RunManifest manifest;
  SimulationResult result;
};

/// Reads a run written by save_run. Throws ConfigError on missing or
/// inconsistent files.
LoadedRun load_run(const std::filesystem::path& dir, const std::string& tag);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// x0,u0,slope,threshold_new,threshold_prior,fires_new,fires_prior,tstar_new,tstar_prior
void write_scan_csv(const std::filesystem::path& path, const ProfileScan& scan);

/// t,q,u,ux,A,B,h (h empty where A B >= 0)
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec);

}  // namespace hrod
