#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hrod/model.hpp"
#include "hrod/solver.hpp"

namespace hrod {

struct FieldSample {
  double u;
  double ux;
};

/// u and ux at (t, x): periodic 4-point Lagrange interpolation in x on the two
/// snapshots bracketing t, then linear interpolation in t.
/// Throws OutOfRange when t lies outside the stored snapshots.
FieldSample sample_solution(const SimulationResult& result, double t, double x);

/// One point on a characteristic q(t) with dq/dt = f'(u(t, q)).
///   A = 2 K alpha phi(u) - ux,  B = 2 K alpha phi(u) + ux,  h = sqrt(-A B) when A B < 0.
struct TrajectorySample {
  double t;
  double q;
  double u;
  double ux;
  double A;
  double B;
  std::optional<double> h;
};

struct TrajectoryRecord {
  double x0 = 0.0;
  std::vector<TrajectorySample> samples;
  double alpha = 0.0;
  double K = 0.0;
  double gamma = 0.0;
  double slope_threshold = 0.0;  // copied from the run config
  bool truncation_warning = false;  // q came within 5 of the periodic boundary
};

/// Follows the characteristic from x0 through the stored run with RK4.
/// Requires an applicable spec and snapshot_stride <= 5.
TrajectoryRecord track(const EquationSpec& spec, const SimulationResult& result, double x0,
                       double cfl = 0.3);

/// Index one past the last sample with |ux| <= 0.8 * slope_threshold.
std::size_t cutoff_index(const TrajectoryRecord& rec);

struct SignPersistenceReport {
  bool applicable = false;
  bool monotone = false;           // no decrease of A and no increase of B at all
  bool within_tolerance = false;   // every step violation <= 1e-3 (1 + |A|) (resp. |B|)
  std::size_t flagged_steps = 0;   // steps with a tolerated violation
  double worst_A_drop = 0.0;
  double worst_B_rise = 0.0;
  double cutoff_time = 0.0;
  std::size_t samples_checked = 0;
};

SignPersistenceReport verify_sign_persistence(const TrajectoryRecord& rec);

struct RiccatiReport {
  bool applicable = false;
  std::size_t samples_checked = 0;
  std::size_t amgm_violations = 0;       // samples with (A - B)/2 < h
  double min_riccati_margin = 0.0;        // min of dh/dt - (gamma/2) h^2
  double riccati_tolerance = 0.0;         // 1e-2 * max h^2
  bool riccati_ok = false;
  double worst_comparison_gap = 0.0;      // max of y(t) - h(t)
  bool comparison_ok = false;
  double h0 = 0.0;
  double implied_blowup_time = 0.0;       // 2 / (gamma h0)
  double cutoff_time = 0.0;
  bool passed = false;
};

RiccatiReport verify_riccati(const TrajectoryRecord& rec);

}  // namespace hrod
