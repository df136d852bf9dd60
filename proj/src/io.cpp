#include "hrod/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hrod/error.hpp"

namespace hrod {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json series_to_json(const std::vector<SeriesPoint>& series) {
  json arr = json::array();
  for (const auto& p : series) arr.push_back({p.t, p.value});
  return arr;
}

std::vector<SeriesPoint> series_from_json(const json& arr) {
  std::vector<SeriesPoint> out;
  for (const auto& p : arr) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> parse_key_value_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str());
}

void to_json(json& j, const SolverConfig& c) {
  j = json{{"cfl", c.cfl},
           {"dt_floor", c.dt_floor},
           {"slope_blowup_threshold", c.slope_blowup_threshold},
           {"t_end", c.t_end},
           {"snapshot_stride", c.snapshot_stride},
           {"dealias", c.dealias},
           {"resolution_tol", c.resolution_tol}};
}

void from_json(const json& j, SolverConfig& c) {
  j.at("cfl").get_to(c.cfl);
  j.at("dt_floor").get_to(c.dt_floor);
  j.at("slope_blowup_threshold").get_to(c.slope_blowup_threshold);
  j.at("t_end").get_to(c.t_end);
  j.at("snapshot_stride").get_to(c.snapshot_stride);
  j.at("dealias").get_to(c.dealias);
  j.at("resolution_tol").get_to(c.resolution_tol);
}

void to_json(json& j, const InitialData& d) { j = json{{"family", d.family}, {"params", d.params}}; }

void from_json(const json& j, InitialData& d) {
  j.at("family").get_to(d.family);
  j.at("params").get_to(d.params);
}

void to_json(json& j, const RunSummary& s) {
  j = json{{"stop_reason", to_string(s.stop_reason)},
           {"blew_up", s.blew_up},
           {"t_detected", optional_number(s.t_detected)},
           {"t_unresolved", optional_number(s.t_unresolved)},
           {"steps", s.steps},
           {"energy_series", series_to_json(s.energy_series)},
           {"min_slope_series", series_to_json(s.min_slope_series)},
           {"snapshot_times", s.snapshot_times},
           {"snapshot_files", s.snapshot_files}};
}

void from_json(const json& j, RunSummary& s) {
  s.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  j.at("blew_up").get_to(s.blew_up);
  s.t_detected = read_optional(j, "t_detected");
  s.t_unresolved = read_optional(j, "t_unresolved");
  j.at("steps").get_to(s.steps);
  s.energy_series = series_from_json(j.at("energy_series"));
  s.min_slope_series = series_from_json(j.at("min_slope_series"));
  j.at("snapshot_times").get_to(s.snapshot_times);
  j.at("snapshot_files").get_to(s.snapshot_files);
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"command", m.command},
           {"tag", m.tag},
           {"spec", m.spec},
           {"spec_id", m.spec_id},
           {"grid", {{"L", m.half_length}, {"n", m.n}}},
           {"solver", m.solver},
           {"init", m.init},
           {"seed", m.seed},
           {"outputs", m.outputs}};
  j["summary"] = m.summary ? json(*m.summary) : json(nullptr);
}

void from_json(const json& j, RunManifest& m) {
  j.at("command").get_to(m.command);
  j.at("tag").get_to(m.tag);
  m.spec = j.at("spec").get<std::map<std::string, std::string>>();
  j.at("spec_id").get_to(m.spec_id);
  j.at("grid").at("L").get_to(m.half_length);
  j.at("grid").at("n").get_to(m.n);
  j.at("solver").get_to(m.solver);
  j.at("init").get_to(m.init);
  j.at("seed").get_to(m.seed);
  j.at("outputs").get_to(m.outputs);
  if (j.contains("summary") && !j.at("summary").is_null())
    m.summary = j.at("summary").get<RunSummary>();
  else
    m.summary.reset();
}

void to_json(json& j, const CriterionReport& r) {
  j = json{{"x0", r.x0},
           {"u0_at_x0", r.u0_at_x0},
           {"slope_at_x0", r.slope_at_x0},
           {"applicable", r.applicable},
           {"branch", to_string(r.branch)},
           {"alpha", finite_or_null(r.alpha)},
           {"K", r.K},
           {"threshold_new", finite_or_null(r.threshold_new)},
           {"threshold_prior", finite_or_null(r.threshold_prior)},
           {"fires_new", r.fires_new},
           {"fires_prior", r.fires_prior},
           {"tstar_bound_new", finite_or_null(r.tstar_bound_new)},
           {"tstar_bound_prior", finite_or_null(r.tstar_bound_prior)}};
}

void to_json(json& j, const SignPersistenceReport& r) {
  j = json{{"applicable", r.applicable},
           {"monotone", r.monotone},
           {"within_tolerance", r.within_tolerance},
           {"flagged_steps", r.flagged_steps},
           {"worst_A_drop", r.worst_A_drop},
           {"worst_B_rise", r.worst_B_rise},
           {"cutoff_time", r.cutoff_time},
           {"samples_checked", r.samples_checked}};
}

void to_json(json& j, const RiccatiReport& r) {
  j = json{{"applicable", r.applicable},
           {"samples_checked", r.samples_checked},
           {"amgm_violations", r.amgm_violations},
           {"min_riccati_margin", finite_or_null(r.min_riccati_margin)},
           {"riccati_tolerance", r.riccati_tolerance},
           {"riccati_ok", r.riccati_ok},
           {"worst_comparison_gap", finite_or_null(r.worst_comparison_gap)},
           {"comparison_ok", r.comparison_ok},
           {"h0", r.h0},
           {"implied_blowup_time", finite_or_null(r.implied_blowup_time)},
           {"cutoff_time", r.cutoff_time},
           {"passed", r.passed}};
}

void to_json(json& j, const ConvolutionCheck& c) {
  j = json{{"applicable", c.applicable},
           {"margin", finite_or_null(c.margin)},
           {"scale", c.scale},
           {"certified", c.certified}};
}

RunSummary summarize_run(const SimulationResult& result, const std::string& tag) {
  RunSummary s;
  s.stop_reason = result.stop_reason;
  s.blew_up = result.blew_up;
  s.t_detected = result.t_detected;
  s.t_unresolved = result.t_unresolved;
  s.steps = result.steps;
  s.energy_series = result.energy_series;
  s.min_slope_series = result.min_slope_series;
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    s.snapshot_times.push_back(result.snapshots[i].t);
    s.snapshot_files.push_back(snapshot_file_name(tag, i));
  }
  return s;
}

std::string snapshot_file_name(const std::string& tag, std::size_t index) {
  return "run-" + tag + "-snap-" + std::to_string(index) + ".csv";
}

std::string manifest_file_name(const std::string& tag) { return "run-" + tag + "-manifest.json"; }

void write_snapshot_csv(const fs::path& path, const GridState& state) {
  auto out = open_for_write(path);
  out << "x,u,ux\n";
  for (std::size_t j = 0; j < state.u.size(); ++j)
    out << format_double(state.grid.x(j)) << ',' << format_double(state.u[j]) << ','
        << format_double(state.ux[j]) << '\n';
}

GridState read_snapshot_csv(const fs::path& path, const Grid& grid, double t) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing snapshot " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,u,ux")
    throw ConfigError("bad snapshot header in " + path.string());
  GridState s{grid, t, {}, {}};
  s.u.reserve(grid.n);
  s.ux.reserve(grid.n);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    std::string xs, us, uxs;
    if (!std::getline(row, xs, ',') || !std::getline(row, us, ',') || !std::getline(row, uxs))
      throw ConfigError("malformed row in " + path.string());
    try {
      s.u.push_back(std::stod(us));
      s.ux.push_back(std::stod(uxs));
    } catch (const std::exception&) {
      throw ConfigError("non-numeric value in " + path.string());
    }
  }
  if (s.u.size() != grid.n)
    throw ConfigError("snapshot " + path.string() + " has " + std::to_string(s.u.size()) +
                      " rows, expected " + std::to_string(grid.n));
  return s;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

RunManifest save_run(const fs::path& dir, RunManifest manifest, const SimulationResult& result) {
  fs::create_directories(dir);
  RunSummary summary = summarize_run(result, manifest.tag);
  for (std::size_t i = 0; i < result.snapshots.size(); ++i)
    write_snapshot_csv(dir / summary.snapshot_files[i], result.snapshots[i]);
  manifest.summary = std::move(summary);
  write_json(dir / manifest_file_name(manifest.tag), manifest);
  return manifest;
}

LoadedRun load_run(const fs::path& dir, const std::string& tag) {
  LoadedRun run;
  try {
    run.manifest = read_json(dir / manifest_file_name(tag)).get<RunManifest>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  if (!run.manifest.summary) throw ConfigError("manifest has no recorded run summary");
  const RunSummary& s = *run.manifest.summary;
  if (s.snapshot_files.size() != s.snapshot_times.size() || s.snapshot_files.empty())
    throw ConfigError("manifest snapshot list is inconsistent");

  const Grid grid = Grid::make(run.manifest.half_length, run.manifest.n);
  auto& r = run.result;
  r.config = run.manifest.solver;
  r.stop_reason = s.stop_reason;
  r.blew_up = s.blew_up;
  r.t_detected = s.t_detected;
  r.t_unresolved = s.t_unresolved;
  r.steps = s.steps;
  r.energy_series = s.energy_series;
  r.min_slope_series = s.min_slope_series;
  for (std::size_t i = 0; i < s.snapshot_files.size(); ++i)
    r.snapshots.push_back(read_snapshot_csv(dir / s.snapshot_files[i], grid, s.snapshot_times[i]));
  return run;
}

void write_scan_csv(const fs::path& path, const ProfileScan& scan) {
  auto out = open_for_write(path);
  out << "x0,u0,slope,threshold_new,threshold_prior,fires_new,fires_prior,tstar_new,tstar_prior\n";
  for (const auto& r : scan.reports)
    out << format_double(r.x0) << ',' << format_double(r.u0_at_x0) << ','
        << format_double(r.slope_at_x0) << ',' << format_double(r.threshold_new) << ','
        << format_double(r.threshold_prior) << ',' << (r.fires_new ? 1 : 0) << ','
        << (r.fires_prior ? 1 : 0) << ',' << format_double(r.tstar_bound_new) << ','
        << format_double(r.tstar_bound_prior) << '\n';
}

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& rec) {
  auto out = open_for_write(path);
  out << "t,q,u,ux,A,B,h\n";
  for (const auto& s : rec.samples) {
    out << format_double(s.t) << ',' << format_double(s.q) << ',' << format_double(s.u) << ','
        << format_double(s.ux) << ',' << format_double(s.A) << ',' << format_double(s.B) << ',';
    if (s.h) out << format_double(*s.h);
    out << '\n';
  }
}

}  // namespace hrod
