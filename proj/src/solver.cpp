#include "hrod/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrod/criterion.hpp"
#include "hrod/error.hpp"
#include "hrod/kernels.hpp"

namespace hrod {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidParameter("cfl must lie in (0, 1]");
  if (!(dt_floor > 0.0)) throw InvalidParameter("dt_floor must be positive");
  if (!(slope_blowup_threshold > 0.0)) throw InvalidParameter("slope threshold must be positive");
  if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");
  if (snapshot_stride == 0) throw InvalidParameter("snapshot_stride must be positive");
  if (!(resolution_tol >= 0.0)) throw InvalidParameter("resolution_tol must be nonnegative");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ReachedTEnd: return "reached-t-end";
    case StopReason::SlopeThreshold: return "slope-threshold";
    case StopReason::DtFloor: return "dt-floor";
    case StopReason::NonFinite: return "non-finite";
    case StopReason::Unresolved: return "unresolved";
  }
  return "reached-t-end";
}

StopReason stop_reason_from_string(const std::string& s) {
  for (auto r : {StopReason::ReachedTEnd, StopReason::SlopeThreshold, StopReason::DtFloor,
                 StopReason::NonFinite, StopReason::Unresolved})
    if (s == to_string(r)) return r;
  throw ConfigError("unknown stop reason '" + s + "'");
}

Solver::Solver(EquationSpec spec, const Grid& grid, bool dealias)
    : spec_(std::move(spec)),
      grid_(grid),
      dealias_(dealias),
      ops_(grid),
      ux_(grid.n),
      transport_(grid.n),
      flux_(grid.n),
      work_(grid.n),
      transport_hat_(grid.n / 2 + 1),
      flux_hat_(grid.n / 2 + 1) {}

void Solver::rhs(std::span<const double> u, std::span<double> out) {
  const std::size_t n = grid_.n;
  ops_.derivative(u, ux_);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = u[i], d = ux_[i];
    transport_[i] = spec_.f.deriv1(v) * d;
    flux_[i] = spec_.g(v) + 0.5 * spec_.f.deriv2(v) * d * d;
  }
  ops_.forward(transport_, transport_hat_);
  ops_.forward(flux_, flux_hat_);
  const std::size_t modes = ops_.modes();
  for (std::size_t j = 0; j < modes; ++j) {
    if (dealias_ && ops_.dealiased_out(j)) {
      transport_hat_[j] = 0.0;
      continue;
    }
    const double k = ops_.wavenumber(j);
    const std::complex<double> symbol =
        j + 1 == modes ? 0.0 : std::complex<double>(0.0, k / (1.0 + k * k));
    transport_hat_[j] = -transport_hat_[j] - symbol * flux_hat_[j];
  }
  ops_.inverse(transport_hat_, out);
}

std::vector<double> Solver::rhs(const GridState& state) {
  std::vector<double> out(grid_.n);
  rhs(state.u, out);
  return out;
}

GridState Solver::make_state(std::vector<double> u, double t) {
  if (u.size() != grid_.n) throw InvalidParameter("state length does not match the grid");
  GridState s{grid_, t, std::move(u), std::vector<double>(grid_.n)};
  ops_.derivative(s.u, s.ux);
  return s;
}

GridState Solver::step(const GridState& state, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("step size must be positive");
  const std::size_t n = grid_.n;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
  const auto& u = state.u;
  rhs(u, k1);
  for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k1[i];
  rhs(stage, k2);
  for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k2[i];
  rhs(stage, k3);
  for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + dt * k3[i];
  rhs(stage, k4);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  if (!all_finite(stage)) throw NonFinite("RK4 step produced non-finite values");
  return make_state(std::move(stage), state.t + dt);
}

double Solver::stable_dt(std::span<const double> u, double cfl) const {
  double speed = 0.0;
  for (double v : u) speed = std::max(speed, std::abs(spec_.f.deriv1(v)));
  return cfl * grid_.dx() / std::max(speed + 1.0, std::numeric_limits<double>::min());
}

std::vector<double> rhs(const EquationSpec& spec, const GridState& state, bool dealias) {
  Solver solver(spec, state.grid, dealias);
  return solver.rhs(state);
}

GridState step(const EquationSpec& spec, const GridState& state, double dt) {
  Solver solver(spec, state.grid);
  return solver.step(state, dt);
}

double energy(const GridState& state) {
  double sum = 0.0;
  for (std::size_t i = 0; i < state.u.size(); ++i)
    sum += state.u[i] * state.u[i] + state.ux[i] * state.ux[i];
  return state.grid.dx() * sum;
}

SimulationResult run(const EquationSpec& spec, const Grid& grid, std::vector<double> u0,
                     const SolverConfig& config) {
  config.validate();
  if (u0.size() != grid.n) throw InvalidParameter("initial data length does not match the grid");
  if (!all_finite(u0)) throw InvalidParameter("initial data must be finite");

  Solver solver(spec, grid, config.dealias);
  SimulationResult result;
  result.config = config;

  auto record = [&result](const GridState& s) {
    result.energy_series.push_back({s.t, energy(s)});
    result.min_slope_series.push_back({s.t, *std::min_element(s.ux.begin(), s.ux.end())});
    result.snapshots.push_back(s);
  };

  GridState state = solver.make_state(std::move(u0), 0.0);
  record(state);
  bool stopped = false;

  while (state.t < config.t_end) {
    const double dt_cfl = solver.stable_dt(state.u, config.cfl);
    if (dt_cfl < config.dt_floor) {
      result.stop_reason = StopReason::DtFloor;
      result.blew_up = true;
      result.t_detected = state.t;
      stopped = true;
      break;
    }
    const bool last = state.t + dt_cfl >= config.t_end;
    const double dt = last ? config.t_end - state.t : dt_cfl;

    GridState next;
    try {
      next = solver.step(state, dt);
    } catch (const NonFinite&) {
      result.stop_reason = StopReason::NonFinite;
      stopped = true;
      break;
    }
    if (last) next.t = config.t_end;
    state = std::move(next);
    ++result.steps;

    const double min_slope = *std::min_element(state.ux.begin(), state.ux.end());
    if (min_slope < -config.slope_blowup_threshold) {
      result.stop_reason = StopReason::SlopeThreshold;
      result.blew_up = true;
      result.t_detected = state.t;
    } else if (config.resolution_tol > 0.0 &&
               solver.tail_fraction(state.u) > config.resolution_tol) {
      result.stop_reason = StopReason::Unresolved;
      result.t_unresolved = state.t;
    }
    const bool stopping = result.blew_up || result.t_unresolved.has_value();
    if (stopping || last || result.steps % config.snapshot_stride == 0) record(state);
    if (stopping) {
      stopped = true;
      break;
    }
  }
  if (!stopped) result.stop_reason = StopReason::ReachedTEnd;
  return result;
}

std::vector<double> nonlocal_source(const EquationSpec& spec, const GridState& state) {
  std::vector<double> w(state.u.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = state.u[i], d = state.ux[i];
    w[i] = spec.g(v) + 0.5 * spec.f.deriv2(v) * d * d;
  }
  return w;
}

ConvolutionCheck check_convolution_estimate(const EquationSpec& spec, const GridState& state) {
  ConvolutionCheck check;
  const Branch branch = branch_of(spec);
  if (branch == Branch::NotApplicable) return check;
  check.applicable = true;

  const double alpha = alpha_from_K(spec.K, branch);
  const double level = spec.extremum.extremal_value;
  const auto w = nonlocal_source(spec, state);
  const auto conv = one_sided_convolutions(state.grid, w);

  check.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    check.scale = std::max(check.scale, std::abs(w[i]));
    const double gi = spec.g(state.u[i]);
    const double bound = spec.extremum.kind == ExtremumKind::ConstantG
                             ? 0.5 * gi
                             : 0.5 * alpha * (gi - level) + 0.5 * level;
    check.margin = std::min({check.margin, conv.plus[i] - bound, conv.minus[i] - bound});
  }
  check.certified = check.margin >= -1e-8 * check.scale;
  return check;
}

}  // namespace hrod
