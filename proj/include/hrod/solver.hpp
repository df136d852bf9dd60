#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrod/grid.hpp"
#include "hrod/model.hpp"
#include "hrod/spectral.hpp"

namespace hrod {

struct SolverConfig {
  double cfl = 0.3;
  double dt_floor = 1e-10;
  double slope_blowup_threshold = 1e3;
  double t_end = 1.0;
  std::size_t snapshot_stride = 1;
  bool dealias = true;
  /// Stop once the spectral tail fraction exceeds this; 0 disables the guard.
  double resolution_tol = 1e-4;

  /// Throws InvalidParameter on nonpositive fields or cfl > 1.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

enum class StopReason { ReachedTEnd, SlopeThreshold, DtFloor, NonFinite, Unresolved };

const char* to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct SeriesPoint {
  double t;
  double value;

  bool operator==(const SeriesPoint&) const = default;
};

struct SimulationResult {
  std::vector<GridState> snapshots;
  std::vector<SeriesPoint> energy_series;
  std::vector<SeriesPoint> min_slope_series;
  bool blew_up = false;
  std::optional<double> t_detected;    // set iff blew_up
  std::optional<double> t_unresolved;  // set iff stop_reason == Unresolved
  StopReason stop_reason = StopReason::ReachedTEnd;
  SolverConfig config;
  std::size_t steps = 0;
};

/// Method-of-lines integrator for
///   u_t + f'(u) u_x + d/dx p * [g(u) + f''(u)/2 u_x^2] = 0
/// on a periodic grid: spectral derivatives, spectral Helmholtz inverse and
/// classical RK4 in time.
class Solver {
 public:
  Solver(EquationSpec spec, const Grid& grid, bool dealias = true);

  const EquationSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }

  /// Time derivative of u; writes into `out`.
  void rhs(std::span<const double> u, std::span<double> out);
  std::vector<double> rhs(const GridState& state);

  /// One RK4 step; the result carries a fresh spectral ux.
  GridState step(const GridState& state, double dt);

  GridState make_state(std::vector<double> u, double t = 0.0);

  /// cfl * dx / (max|f'(u)| + 1).
  double stable_dt(std::span<const double> u, double cfl) const;

  double tail_fraction(std::span<const double> u) { return ops_.tail_fraction(u); }

 private:
  EquationSpec spec_;
  Grid grid_;
  bool dealias_;
  SpectralOps ops_;
  std::vector<double> ux_, transport_, flux_, work_;
  std::vector<std::complex<double>> transport_hat_, flux_hat_;
};

std::vector<double> rhs(const EquationSpec& spec, const GridState& state, bool dealias = true);
GridState step(const EquationSpec& spec, const GridState& state, double dt);

/// Integrates from u0 until t_end or a stop condition; see StopReason.
SimulationResult run(const EquationSpec& spec, const Grid& grid, std::vector<double> u0,
                     const SolverConfig& config);

/// dx * sum(u^2 + ux^2).
double energy(const GridState& state);

/// g(u) + f''(u)/2 ux^2 at every node.
std::vector<double> nonlocal_source(const EquationSpec& spec, const GridState& state);

struct ConvolutionCheck {
  bool applicable = false;
  double margin = 0.0;  // min over nodes and both sides of LHS - RHS
  double scale = 0.0;   // max |w|
  bool certified = false;
};

/// Checks the one-sided convolution lower bounds
///   (p 1_{R+-}) * w >= alpha/2 (g(u) - m) + m/2     (or with M; g/2 when g is constant)
/// at every node of `state`. certified means margin >= -1e-8 * scale.
ConvolutionCheck check_convolution_estimate(const EquationSpec& spec, const GridState& state);

}  // namespace hrod
