#include "hrod/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrod/criterion.hpp"
#include "hrod/error.hpp"

namespace hrod {

namespace {

constexpr std::size_t kMaxTrackStride = 5;
constexpr double kBoundaryMargin = 5.0;
constexpr double kCutoffFraction = 0.8;
constexpr double kMonotoneSlack = 1e-3;
constexpr double kRiccatiSlack = 1e-2;
constexpr double kComparisonSlack = 1e-3;

FieldSample interpolate(const GridState& s, double x) {
  const Grid& g = s.grid;
  const std::size_t n = g.n;
  const double pos = (g.fold(x) + g.half_length) / g.dx();
  double base = std::floor(pos);
  double r = pos - base;
  auto j = static_cast<std::size_t>(base) % n;
  if (r == 0.0) return {s.u[j], s.ux[j]};
  // 4-point Lagrange weights on nodes j-1, j, j+1, j+2.
  const double w0 = -r * (r - 1.0) * (r - 2.0) / 6.0;
  const double w1 = (r + 1.0) * (r - 1.0) * (r - 2.0) / 2.0;
  const double w2 = -(r + 1.0) * r * (r - 2.0) / 2.0;
  const double w3 = (r + 1.0) * r * (r - 1.0) / 6.0;
  const std::size_t jm = (j + n - 1) % n, jp = (j + 1) % n, jpp = (j + 2) % n;
  return {w0 * s.u[jm] + w1 * s.u[j] + w2 * s.u[jp] + w3 * s.u[jpp],
          w0 * s.ux[jm] + w1 * s.ux[j] + w2 * s.ux[jp] + w3 * s.ux[jpp]};
}

}  // namespace

FieldSample sample_solution(const SimulationResult& result, double t, double x) {
  const auto& snaps = result.snapshots;
  if (snaps.empty()) throw OutOfRange("simulation result has no snapshots");
  if (t < snaps.front().t || t > snaps.back().t)
    throw OutOfRange("t = " + std::to_string(t) + " outside the stored time range");
  auto upper = std::upper_bound(snaps.begin(), snaps.end(), t,
                                [](double tq, const GridState& s) { return tq < s.t; });
  if (upper == snaps.begin()) ++upper;
  const GridState& before = *(upper - 1);
  if (before.t == t || upper == snaps.end()) return interpolate(before, x);
  const GridState& after = *upper;
  const FieldSample a = interpolate(before, x);
  const FieldSample b = interpolate(after, x);
  const double theta = (t - before.t) / (after.t - before.t);
  return {a.u + theta * (b.u - a.u), a.ux + theta * (b.ux - a.ux)};
}

TrajectoryRecord track(const EquationSpec& spec, const SimulationResult& result, double x0,
                       double cfl) {
  const Branch branch = branch_of(spec);
  if (branch == Branch::NotApplicable)
    throw HypothesisViolation("track: criterion hypotheses do not hold for " + spec.id());
  if (result.config.snapshot_stride > kMaxTrackStride)
    throw ConfigError("track: snapshot_stride " + std::to_string(result.config.snapshot_stride) +
                      " exceeds 5 solver steps per snapshot");
  if (result.snapshots.empty()) throw ConfigError("track: simulation result has no snapshots");

  TrajectoryRecord rec;
  rec.x0 = x0;
  rec.K = spec.K;
  rec.gamma = spec.gamma;
  rec.alpha = alpha_from_K(spec.K, branch);
  rec.slope_threshold = result.config.slope_blowup_threshold;
  const double two_k_alpha = 2.0 * rec.K * rec.alpha;
  const Grid& grid = result.snapshots.front().grid;

  auto make_sample = [&](double t, double q) {
    const FieldSample fs = sample_solution(result, t, q);
    const double ph = phi(spec, fs.u);
    TrajectorySample s{t, q, fs.u, fs.ux, two_k_alpha * ph - fs.ux, two_k_alpha * ph + fs.ux, {}};
    if (s.A * s.B < 0.0) s.h = std::sqrt(-s.A * s.B);
    return s;
  };
  auto velocity = [&](double t, double q) {
    return spec.f.deriv1(sample_solution(result, t, q).u);
  };

  double q = x0;
  rec.samples.push_back(make_sample(result.snapshots.front().t, q));
  for (std::size_t i = 0; i + 1 < result.snapshots.size(); ++i) {
    const GridState& s0 = result.snapshots[i];
    const double t0 = s0.t, t1 = result.snapshots[i + 1].t;
    double speed = 0.0;
    for (double v : s0.u) speed = std::max(speed, std::abs(spec.f.deriv1(v)));
    const double span = t1 - t0;
    std::size_t substeps = 1;
    if (speed > 0.0) {
      const double dt_max = cfl * grid.dx() / speed;
      substeps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt_max)));
    }
    const double h = span / static_cast<double>(substeps);
    for (std::size_t k = 0; k < substeps; ++k) {
      const double t = t0 + static_cast<double>(k) * h;
      const double tn = k + 1 == substeps ? t1 : t + h;
      const double hh = tn - t;
      const double k1 = velocity(t, q);
      const double k2 = velocity(t + 0.5 * hh, q + 0.5 * hh * k1);
      const double k3 = velocity(t + 0.5 * hh, q + 0.5 * hh * k2);
      const double k4 = velocity(tn, q + hh * k3);
      q += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (std::abs(q) > grid.half_length - kBoundaryMargin) rec.truncation_warning = true;
      rec.samples.push_back(make_sample(tn, q));
    }
  }
  return rec;
}

std::size_t cutoff_index(const TrajectoryRecord& rec) {
  const double limit = kCutoffFraction * rec.slope_threshold;
  for (std::size_t i = 0; i < rec.samples.size(); ++i)
    if (std::abs(rec.samples[i].ux) > limit) return i;
  return rec.samples.size();
}

SignPersistenceReport verify_sign_persistence(const TrajectoryRecord& rec) {
  SignPersistenceReport rep;
  if (rec.samples.empty()) return rep;
  const auto& first = rec.samples.front();
  if (!(first.A > 0.0 && first.B < 0.0)) return rep;
  rep.applicable = true;
  rep.monotone = true;
  rep.within_tolerance = true;

  const std::size_t cut = cutoff_index(rec);
  rep.samples_checked = cut;
  rep.cutoff_time = cut > 0 ? rec.samples[cut - 1].t : first.t;
  for (std::size_t i = 1; i < cut; ++i) {
    const auto& prev = rec.samples[i - 1];
    const auto& cur = rec.samples[i];
    const double drop = prev.A - cur.A;
    const double rise = cur.B - prev.B;
    bool flagged = false;
    if (drop > 0.0) {
      rep.monotone = false;
      rep.worst_A_drop = std::max(rep.worst_A_drop, drop);
      if (drop <= kMonotoneSlack * (1.0 + std::abs(prev.A)))
        flagged = true;
      else
        rep.within_tolerance = false;
    }
    if (rise > 0.0) {
      rep.monotone = false;
      rep.worst_B_rise = std::max(rep.worst_B_rise, rise);
      if (rise <= kMonotoneSlack * (1.0 + std::abs(prev.B)))
        flagged = true;
      else
        rep.within_tolerance = false;
    }
    rep.flagged_steps += flagged;
  }
  return rep;
}

RiccatiReport verify_riccati(const TrajectoryRecord& rec) {
  RiccatiReport rep;
  if (rec.samples.empty()) return rep;
  const auto& first = rec.samples.front();
  if (!(first.A > 0.0 && first.B < 0.0) || !first.h) return rep;
  rep.applicable = true;

  const std::size_t cut = cutoff_index(rec);
  rep.samples_checked = cut;
  rep.cutoff_time = cut > 0 ? rec.samples[cut - 1].t : first.t;
  rep.h0 = *first.h;
  rep.implied_blowup_time = 2.0 / (rec.gamma * rep.h0);

  const double eps = std::numeric_limits<double>::epsilon();
  double max_h2 = 0.0;
  for (std::size_t i = 0; i < cut; ++i) {
    const auto& s = rec.samples[i];
    if (!s.h) continue;
    max_h2 = std::max(max_h2, *s.h * *s.h);
    if (0.5 * (s.A - s.B) < *s.h * (1.0 - 4.0 * eps)) ++rep.amgm_violations;
  }
  rep.riccati_tolerance = kRiccatiSlack * max_h2;

  // Three-point derivative on the nonuniform sample times.
  rep.min_riccati_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < cut; ++i) {
    const auto& a = rec.samples[i - 1];
    const auto& b = rec.samples[i];
    const auto& c = rec.samples[i + 1];
    if (!a.h || !b.h || !c.h) continue;
    const double ha = b.t - a.t, hb = c.t - b.t;
    const double dh = -hb / (ha * (ha + hb)) * *a.h + (hb - ha) / (ha * hb) * *b.h +
                      ha / (hb * (ha + hb)) * *c.h;
    rep.min_riccati_margin =
        std::min(rep.min_riccati_margin, dh - 0.5 * rec.gamma * *b.h * *b.h);
  }
  rep.riccati_ok = rep.min_riccati_margin >= -rep.riccati_tolerance;

  // y' = (gamma/2) y^2, y(t0) = h0 has y = h0 / (1 - gamma h0 (t - t0) / 2).
  rep.comparison_ok = true;
  rep.worst_comparison_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cut; ++i) {
    const auto& s = rec.samples[i];
    const double denom = 1.0 - 0.5 * rec.gamma * rep.h0 * (s.t - first.t);
    if (denom <= 0.0) break;
    const double y = rep.h0 / denom;
    const double h = s.h ? *s.h : 0.0;
    rep.worst_comparison_gap = std::max(rep.worst_comparison_gap, y - h);
    if (h < y - kComparisonSlack * (1.0 + y)) rep.comparison_ok = false;
  }
  rep.passed = rep.amgm_violations == 0 && rep.riccati_ok && rep.comparison_ok;
  return rep;
}

}  // namespace hrod
