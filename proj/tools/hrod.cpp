// Command-line front end: criterion scans, simulations, characteristic traces
// and parameter sweeps for the generalized hyperelastic rod equation.

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrod/characteristics.hpp"
#include "hrod/criterion.hpp"
#include "hrod/error.hpp"
#include "hrod/initial_data.hpp"
#include "hrod/io.hpp"
#include "hrod/model.hpp"
#include "hrod/solver.hpp"
#include "hrod/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNothingFires = 3,
  kNotApplicable = 4,
  kBlowUp = 5,
  kNonFinite = 6,
  kVerificationFailed = 7,
  kUnresolved = 8,
};

struct SpecOptions {
  std::string config_file;
  std::string preset = "ch";
  double rod_gamma = 2.0;
  hrod::RotationChParams rch;
  CLI::App* app = nullptr;
};

struct RunOptions {
  double L = 20.0;
  std::size_t n = 1024;
  double t_end = 1.0;
  double cfl = 0.3;
  std::size_t snapshot_stride = 1;
  double slope_threshold = 1e3;
  double resolution_tol = 1e-4;
  bool no_dealias = false;
  std::string init = "zero";
  std::string init_params;
  std::string out = "out";
  std::string tag = "main";
  std::uint64_t seed = 0;
};

void add_spec_options(CLI::App* cmd, SpecOptions& o) {
  o.app = cmd;
  cmd->add_option("--config", o.config_file, "Key-value file with preset parameters");
  cmd->add_option("--preset", o.preset, "Equation preset")
      ->check(CLI::IsMember({"ch", "rod", "rch"}));
  cmd->add_option("--rod-gamma", o.rod_gamma, "Rod preset gamma");
  cmd->add_option("--rch-c0", o.rch.c0);
  cmd->add_option("--rch-alpha", o.rch.alpha);
  cmd->add_option("--rch-beta", o.rch.beta);
  cmd->add_option("--rch-beta0", o.rch.beta0);
  cmd->add_option("--rch-omega1", o.rch.omega1);
  cmd->add_option("--rch-omega2", o.rch.omega2);
}

void add_grid_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--L", o.L, "Half-length of the periodic domain");
  cmd->add_option("--n", o.n, "Grid size (power of two >= 64)");
  cmd->add_option("--init", o.init, "Initial-data family")
      ->check(CLI::IsMember({"zero", "constant", "gaussian", "antisym-gauss", "smoothed-peakon"}));
  cmd->add_option("--init-params", o.init_params, "Comma-separated family parameters");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--tag", o.tag, "Run tag used in file names");
}

void add_solver_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--t-end", o.t_end);
  cmd->add_option("--cfl", o.cfl);
  cmd->add_option("--snapshot-stride", o.snapshot_stride);
  cmd->add_option("--slope-threshold", o.slope_threshold);
  cmd->add_option("--resolution-tol", o.resolution_tol, "Spectral tail guard, 0 disables");
  cmd->add_flag("--no-dealias", o.no_dealias);
  cmd->add_option("--seed", o.seed);
}

bool given(const SpecOptions& o, const char* flag) { return o.app->count(flag) > 0; }

std::map<std::string, std::string> spec_key_values(const SpecOptions& o) {
  std::map<std::string, std::string> kv;
  if (!o.config_file.empty()) kv = hrod::parse_key_value_file(o.config_file);
  if (given(o, "--preset") || !kv.count("preset")) kv["preset"] = o.preset;
  auto set = [&](const char* flag, const char* key, double v) {
    if (given(o, flag)) kv[key] = hrod::format_double(v);
  };
  set("--rod-gamma", "rod.gamma", o.rod_gamma);
  set("--rch-c0", "rch.c0", o.rch.c0);
  set("--rch-alpha", "rch.alpha", o.rch.alpha);
  set("--rch-beta", "rch.beta", o.rch.beta);
  set("--rch-beta0", "rch.beta0", o.rch.beta0);
  set("--rch-omega1", "rch.omega1", o.rch.omega1);
  set("--rch-omega2", "rch.omega2", o.rch.omega2);
  return kv;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw hrod::InvalidParameter("not a number: '" + item + "'");
    }
  }
  return out;
}

hrod::SolverConfig solver_config(const RunOptions& o) {
  hrod::SolverConfig c;
  c.cfl = o.cfl;
  c.t_end = o.t_end;
  c.snapshot_stride = o.snapshot_stride;
  c.slope_blowup_threshold = o.slope_threshold;
  c.resolution_tol = o.resolution_tol;
  c.dealias = !o.no_dealias;
  c.validate();
  return c;
}

hrod::RunManifest make_manifest(const std::string& command, const SpecOptions& so,
                                const RunOptions& ro) {
  hrod::RunManifest m;
  m.command = command;
  m.tag = ro.tag;
  const auto spec = hrod::spec_from_key_values(spec_key_values(so));
  m.spec = hrod::spec_to_key_values(spec);
  m.spec_id = spec.id();
  m.half_length = ro.L;
  m.n = ro.n;
  m.solver = solver_config(ro);
  m.init = hrod::normalized({ro.init, parse_list(ro.init_params)});
  m.seed = ro.seed;
  return m;
}

int exit_code_for(hrod::StopReason r) {
  switch (r) {
    case hrod::StopReason::ReachedTEnd: return kOk;
    case hrod::StopReason::SlopeThreshold:
    case hrod::StopReason::DtFloor: return kBlowUp;
    case hrod::StopReason::NonFinite: return kNonFinite;
    case hrod::StopReason::Unresolved: return kUnresolved;
  }
  return kOk;
}

json scan_summary(const hrod::EquationSpec& spec, const hrod::ProfileScan& scan) {
  const auto branch = hrod::branch_of(spec);
  json j{{"spec_id", spec.id()},
         {"branch", hrod::to_string(branch)},
         {"applicable", scan.applicable},
         {"K", spec.K},
         {"gamma", spec.gamma},
         {"extremum", {{"kind", hrod::to_string(spec.extremum.kind)},
                       {"c", spec.extremum.c},
                       {"value", spec.extremum.extremal_value}}},
         {"nodes", scan.reports.size()},
         {"fired_new", scan.fired_new},
         {"fired_prior", scan.fired_prior}};
  j["alpha"] = scan.applicable ? json(hrod::alpha_from_K(spec.K, branch)) : json(nullptr);
  if (scan.best) {
    const auto& best = scan.reports[*scan.best];
    j["best_x0"] = best.x0;
    j["best_bound"] = scan.best_bound;
    j["best_report"] = best;
  } else {
    j["best_x0"] = nullptr;
    j["best_bound"] = nullptr;
  }
  return j;
}

int cmd_criterion(const SpecOptions& so, const RunOptions& ro) {
  const auto spec = hrod::spec_from_key_values(spec_key_values(so));
  const auto grid = hrod::Grid::make(ro.L, ro.n);
  const auto init = hrod::normalized({ro.init, parse_list(ro.init_params)});
  const auto state = hrod::make_state(grid, hrod::build_initial_data(init, grid));
  const auto scan = hrod::scan_profile(spec, state);

  const fs::path dir(ro.out);
  hrod::write_scan_csv(dir / ("criterion-" + ro.tag + "-scan.csv"), scan);
  json summary = scan_summary(spec, scan);
  summary["init"] = init;
  summary["grid"] = {{"L", ro.L}, {"n", ro.n}};
  hrod::write_json(dir / ("criterion-" + ro.tag + "-summary.json"), summary);

  if (!scan.applicable) {
    std::cout << "criterion: not applicable for " << spec.id() << " (K = " << spec.K << ")\n";
    return kNotApplicable;
  }
  if (!scan.best) {
    std::cout << "criterion: no node fires\n";
    return kNothingFires;
  }
  std::cout << "criterion: " << scan.fired_new << " nodes fire; best x0 = "
            << scan.reports[*scan.best].x0 << ", T* <= " << scan.best_bound << '\n';
  return kOk;
}

int simulate_manifest(hrod::RunManifest manifest, const fs::path& dir) {
  const auto spec = hrod::spec_from_key_values(manifest.spec);
  const auto grid = hrod::Grid::make(manifest.half_length, manifest.n);
  const auto u0 = hrod::build_initial_data(manifest.init, grid);
  const auto result = hrod::run(spec, grid, u0, manifest.solver);

  manifest.outputs = {hrod::manifest_file_name(manifest.tag)};
  const auto saved = hrod::save_run(dir, manifest, result);

  std::ofstream series(dir / ("run-" + manifest.tag + "-series.csv"));
  series << "t,energy,min_slope\n";
  for (std::size_t i = 0; i < result.energy_series.size(); ++i)
    series << hrod::format_double(result.energy_series[i].t) << ','
           << hrod::format_double(result.energy_series[i].value) << ','
           << hrod::format_double(result.min_slope_series[i].value) << '\n';

  const double e0 = result.energy_series.front().value;
  const double e1 = result.energy_series.back().value;
  std::cout << "simulate: " << hrod::to_string(result.stop_reason) << " at t = "
            << result.snapshots.back().t << " after " << result.steps
            << " steps; energy drift = " << std::abs(e1 - e0) / std::max(e0, 1e-300) << '\n';
  if (result.t_detected) std::cout << "simulate: blow-up detected at t = " << *result.t_detected << '\n';
  return exit_code_for(result.stop_reason);
}

int cmd_simulate(const SpecOptions& so, const RunOptions& ro, const std::string& from_manifest) {
  if (!from_manifest.empty()) {
    hrod::RunManifest m;
    try {
      m = hrod::read_json(from_manifest).get<hrod::RunManifest>();
    } catch (const json::exception& e) {
      throw hrod::ConfigError(std::string("malformed manifest: ") + e.what());
    }
    m.summary.reset();
    return simulate_manifest(std::move(m), ro.out);
  }
  return simulate_manifest(make_manifest("simulate", so, ro), ro.out);
}

int cmd_trace(const std::string& run_dir, const std::string& tag, double x0, std::string out) {
  const auto loaded = hrod::load_run(run_dir, tag);
  const auto spec = hrod::spec_from_key_values(loaded.manifest.spec);
  if (hrod::branch_of(spec) == hrod::Branch::NotApplicable) {
    std::cout << "trace: criterion hypotheses do not hold for " << spec.id() << '\n';
    return kNotApplicable;
  }
  if (out.empty()) out = run_dir;

  const auto rec = hrod::track(spec, loaded.result, x0);
  const auto sign = hrod::verify_sign_persistence(rec);
  const auto riccati = hrod::verify_riccati(rec);
  const auto& first = loaded.result.snapshots.front();
  const auto start = hrod::sample_solution(loaded.result, first.t, x0);
  const auto point = hrod::check_point(spec, start.u, start.ux, x0);

  const fs::path dir(out);
  hrod::write_trajectory_csv(dir / ("trace-" + tag + "-trajectory.csv"), rec);
  json j{{"x0", x0},
         {"spec_id", spec.id()},
         {"K", rec.K},
         {"alpha", rec.alpha},
         {"gamma", rec.gamma},
         {"truncation_warning", rec.truncation_warning},
         {"criterion", point},
         {"sign_persistence", sign},
         {"riccati", riccati}};
  j["detected_blowup_time"] =
      loaded.result.t_detected ? json(*loaded.result.t_detected) : json(nullptr);
  const bool applicable = sign.applicable && riccati.applicable;
  bool passed = true;
  if (applicable) {
    passed = sign.within_tolerance && riccati.passed;
    if (point.fires_new && std::isfinite(point.tstar_bound_new)) {
      const bool consistent = riccati.cutoff_time <= 1.1 * point.tstar_bound_new;
      j["cutoff_within_bound"] = consistent;
      passed = passed && consistent;
    }
  }
  j["applicable"] = applicable;
  j["passed"] = passed;
  hrod::write_json(dir / ("trace-" + tag + "-verification.json"), j);

  if (!applicable) {
    std::cout << "trace: criterion does not fire at x0 = " << x0 << "; nothing to verify\n";
    return kOk;
  }
  std::cout << "trace: sign persistence " << (sign.within_tolerance ? "ok" : "FAILED")
            << ", riccati " << (riccati.passed ? "ok" : "FAILED") << ", cutoff t = "
            << riccati.cutoff_time << ", implied blow-up time " << riccati.implied_blowup_time
            << '\n';
  return passed ? kOk : kVerificationFailed;
}

struct SweepPoint {
  double gamma = 0.0;
  double amplitude = 0.0;
};

struct SweepRow {
  SweepPoint point;
  std::string spec_id;
  double K = 0.0;
  double alpha = NAN;
  std::string branch;
  double best_x0 = NAN;
  double bound = INFINITY;
  std::string stop_reason;
  std::optional<double> t_detected;
  std::optional<double> t_unresolved;
  std::string error;
};

int cmd_sweep(const SpecOptions& so, const RunOptions& ro, const std::string& gammas_text,
              const std::string& amplitudes_text, std::size_t random_points,
              const std::string& gamma_range, int jobs) {
  auto base_kv = spec_key_values(so);
  std::vector<double> gammas = parse_list(gammas_text);
  std::vector<double> amplitudes = parse_list(amplitudes_text);
  if (random_points > 0) {
    const auto range = parse_list(gamma_range);
    if (range.size() != 2 || !(range[0] < range[1]))
      throw hrod::InvalidParameter("--gamma-range needs lo,hi with lo < hi");
    std::mt19937_64 rng(ro.seed);
    std::uniform_real_distribution<double> dist(range[0], range[1]);
    for (std::size_t i = 0; i < random_points; ++i) gammas.push_back(dist(rng));
  }
  const bool rod = base_kv.at("preset") == "rod";
  if (!gammas.empty() && !rod) throw hrod::InvalidParameter("gamma sweeps need --preset rod");

  const auto base_init = hrod::normalized({ro.init, parse_list(ro.init_params)});
  const double base_amp = base_init.params.empty() ? 0.0 : base_init.params[0];
  const double base_gamma = rod ? hrod::spec_from_key_values(base_kv).params.at("gamma") : 0.0;
  if (gammas.empty()) gammas.push_back(base_gamma);
  if (amplitudes.empty()) amplitudes.push_back(base_amp);
  if (!amplitudes_text.empty() && base_init.params.empty())
    throw hrod::InvalidParameter("amplitude sweeps need an initial family with parameters");

  std::vector<SweepPoint> points;
  for (double g : gammas)
    for (double a : amplitudes) points.push_back({g, a});
  if (points.empty()) throw hrod::InvalidParameter("empty sweep");

  const auto grid = hrod::Grid::make(ro.L, ro.n);
  const auto config = solver_config(ro);
  std::vector<SweepRow> rows(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    SweepRow& row = rows[i];
    row.point = points[i];
    try {
      auto kv = base_kv;
      if (rod) kv["rod.gamma"] = hrod::format_double(points[i].gamma);
      const auto spec = hrod::spec_from_key_values(kv);
      auto init = base_init;
      if (!init.params.empty()) init.params[0] = points[i].amplitude;
      const auto u0 = hrod::build_initial_data(init, grid);
      const auto scan = hrod::scan_profile(spec, hrod::make_state(grid, u0));
      const auto branch = hrod::branch_of(spec);
      row.spec_id = spec.id();
      row.K = spec.K;
      row.branch = hrod::to_string(branch);
      if (scan.applicable) row.alpha = hrod::alpha_from_K(spec.K, branch);
      if (scan.best) {
        row.best_x0 = scan.reports[*scan.best].x0;
        row.bound = scan.best_bound;
      }
      const auto result = hrod::run(spec, grid, u0, config);
      row.stop_reason = hrod::to_string(result.stop_reason);
      row.t_detected = result.t_detected;
      row.t_unresolved = result.t_unresolved;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }

  const fs::path dir(ro.out);
  fs::create_directories(dir);
  std::ofstream csv(dir / ("sweep-" + ro.tag + ".csv"));
  csv << "index,gamma,amplitude,spec_id,K,alpha,branch,best_x0,tstar_bound,stop_reason,"
         "t_detected,t_unresolved,error\n";
  auto opt = [](const std::optional<double>& v) { return v ? hrod::format_double(*v) : "none"; };
  int status = kOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.error.empty()) status = kUsage;
    csv << i << ',' << hrod::format_double(r.point.gamma) << ','
        << hrod::format_double(r.point.amplitude) << ',' << r.spec_id << ','
        << hrod::format_double(r.K) << ',' << hrod::format_double(r.alpha) << ',' << r.branch
        << ',' << hrod::format_double(r.best_x0) << ','
        << (std::isfinite(r.bound) ? hrod::format_double(r.bound) : "none") << ','
        << r.stop_reason << ',' << opt(r.t_detected) << ',' << opt(r.t_unresolved) << ','
        << r.error << '\n';
  }

  hrod::RunManifest m;
  m.command = "sweep";
  m.tag = ro.tag;
  m.spec = hrod::spec_to_key_values(hrod::spec_from_key_values(base_kv));
  m.spec_id = hrod::spec_from_key_values(base_kv).id();
  m.half_length = ro.L;
  m.n = ro.n;
  m.solver = config;
  m.init = base_init;
  m.seed = ro.seed;
  m.outputs = {"sweep-" + ro.tag + ".csv"};
  json mj = m;
  mj["sweep"] = {{"gammas", gammas}, {"amplitudes", amplitudes}};
  hrod::write_json(dir / ("sweep-" + ro.tag + "-manifest.json"), mj);
  std::cout << "sweep: " << rows.size() << " points written to "
            << (dir / ("sweep-" + ro.tag + ".csv")).string() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up laboratory for the generalized hyperelastic rod equation"};
  app.require_subcommand(1);

  SpecOptions crit_spec, sim_spec, sweep_spec;
  RunOptions crit_run, sim_run, sweep_run;

  auto* crit = app.add_subcommand("criterion", "Scan an initial profile with the blow-up criteria");
  add_spec_options(crit, crit_spec);
  add_grid_options(crit, crit_run);

  auto* sim = app.add_subcommand("simulate", "Integrate the equation and write a run directory");
  add_spec_options(sim, sim_spec);
  add_grid_options(sim, sim_run);
  add_solver_options(sim, sim_run);
  std::string from_manifest;
  sim->add_option("--from-manifest", from_manifest, "Re-run from a saved manifest");

  auto* trace = app.add_subcommand("trace", "Follow a characteristic through a saved run");
  std::string run_dir, trace_tag = "main", trace_out;
  double x0 = 0.0;
  trace->add_option("--run", run_dir, "Run directory written by simulate")->required();
  trace->add_option("--tag", trace_tag);
  trace->add_option("--x0", x0, "Starting point of the characteristic");
  trace->add_option("--out", trace_out, "Output directory (default: the run directory)");

  auto* sweep = app.add_subcommand("sweep", "Criterion + simulation over a parameter grid");
  add_spec_options(sweep, sweep_spec);
  add_grid_options(sweep, sweep_run);
  add_solver_options(sweep, sweep_run);
  std::string gammas, amplitudes, gamma_range = "1,3";
  std::size_t random_points = 0;
  int jobs = omp_get_max_threads();
  sweep->add_option("--rod-gammas", gammas, "Comma-separated rod gammas");
  sweep->add_option("--amplitudes", amplitudes, "Comma-separated initial amplitudes");
  sweep->add_option("--random-points", random_points, "Extra gammas drawn from --gamma-range");
  sweep->add_option("--gamma-range", gamma_range);
  sweep->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*crit) return cmd_criterion(crit_spec, crit_run);
    if (*sim) return cmd_simulate(sim_spec, sim_run, from_manifest);
    if (*trace) return cmd_trace(run_dir, trace_tag, x0, trace_out);
    if (*sweep) {
      if ((sweep->count("--rod-gammas") && parse_list(gammas).empty()) ||
          (sweep->count("--amplitudes") && parse_list(amplitudes).empty()))
        throw hrod::InvalidParameter("empty sweep range");
      return cmd_sweep(sweep_spec, sweep_run, gammas, amplitudes, random_points, gamma_range, jobs);
    }
  } catch (const hrod::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const hrod::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const hrod::HypothesisViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotApplicable;
  } catch (const hrod::NonFinite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNonFinite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
