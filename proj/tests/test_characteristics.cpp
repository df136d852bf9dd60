#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hrod/characteristics.hpp"
#include "hrod/criterion.hpp"
#include "hrod/error.hpp"
#include "hrod/initial_data.hpp"

using namespace hrod;

namespace {

// Two identical snapshots of a static field at t = 0 and t = 1.
SimulationResult static_field(const Grid& g, double k) {
  std::vector<double> u(g.n);
  for (std::size_t j = 0; j < g.n; ++j) u[j] = std::cos(k * g.x(j));
  SimulationResult r;
  r.snapshots.push_back(make_state(g, u, 0.0));
  r.snapshots.push_back(make_state(g, u, 1.0));
  return r;
}

// Hand-built record following y' = (gamma/2) y^2 exactly with K = 0, so A = -ux = h.
TrajectoryRecord riccati_record(double gamma, double h0, double t_end, int steps) {
  TrajectoryRecord rec;
  rec.K = 0.0;
  rec.alpha = 1.0;
  rec.gamma = gamma;
  rec.slope_threshold = 1e3;
  for (int i = 0; i <= steps; ++i) {
    const double t = t_end * i / steps;
    const double y = h0 / (1 - 0.5 * gamma * h0 * t);
    rec.samples.push_back({t, 0.0, 0.0, -y, y, -y, y});
  }
  return rec;
}

}  // namespace

TEST_CASE("sample_solution reproduces stored nodes") {
  const auto g = Grid::make(20.0, 256);
  const auto r = static_field(g, std::numbers::pi / 20.0 * 3);
  for (std::size_t j : {0u, 17u, 128u, 255u}) {
    const auto s = sample_solution(r, 0.0, g.x(j));
    CHECK(s.u == r.snapshots[0].u[j]);
    CHECK(s.ux == r.snapshots[0].ux[j]);
  }
  const auto end = sample_solution(r, 1.0, g.x(9));
  CHECK(end.u == r.snapshots[1].u[9]);
}

TEST_CASE("sample_solution interpolates at fourth order") {
  const double L = 20.0;
  const double k = 5 * std::numbers::pi / L;
  for (std::size_t n : {256u, 512u}) {
    const auto g = Grid::make(L, n);
    const auto r = static_field(g, k);
    const double dx = g.dx();
    double eu = 0.0, ed = 0.0;
    for (int i = 0; i < 997; ++i) {
      const double x = -L + (2 * L) * (i + 0.37) / 997;
      const auto s = sample_solution(r, 0.4, x);
      eu = std::max(eu, std::abs(s.u - std::cos(k * x)));
      ed = std::max(ed, std::abs(s.ux + k * std::sin(k * x)));
    }
    // Lagrange remainder: max |(r+1) r (r-1) (r-2)| / 4! = 9/384 on the middle cell
    const double c = 9.0 / 384.0 * std::pow(k * dx, 4);
    CHECK(eu <= c * 1.01);
    CHECK(ed <= c * k * 1.01);
  }
}

TEST_CASE("sample_solution folds periodically and checks the time range") {
  const auto g = Grid::make(20.0, 256);
  const auto r = static_field(g, std::numbers::pi / 20.0 * 2);
  const auto a = sample_solution(r, 0.5, 3.21);
  const auto b = sample_solution(r, 0.5, 3.21 + 40.0);
  const auto c = sample_solution(r, 0.5, 3.21 - 80.0);
  CHECK(a.u == doctest::Approx(b.u).epsilon(1e-13));
  CHECK(a.u == doctest::Approx(c.u).epsilon(1e-13));
  CHECK_THROWS_AS(sample_solution(r, -0.1, 0.0), OutOfRange);
  CHECK_THROWS_AS(sample_solution(r, 1.1, 0.0), OutOfRange);
  CHECK_THROWS_AS(sample_solution(SimulationResult{}, 0.0, 0.0), OutOfRange);
}

TEST_CASE("linear interpolation in time") {
  const auto g = Grid::make(20.0, 64);
  SimulationResult r;
  r.snapshots.push_back(make_state(g, std::vector<double>(g.n, 1.0), 0.0));
  r.snapshots.push_back(make_state(g, std::vector<double>(g.n, 3.0), 2.0));
  CHECK(sample_solution(r, 0.5, 1.3).u == doctest::Approx(1.5));
}

TEST_CASE("characteristics of trivial flows") {
  const auto g = Grid::make(20.0, 256);
  const auto spec = preset_camassa_holm();
  SolverConfig c;
  c.t_end = 1.0;
  SUBCASE("zero flow") {
    const auto r = run(spec, g, std::vector<double>(g.n, 0.0), c);
    const auto rec = track(spec, r, 2.5);
    for (const auto& s : rec.samples) CHECK(s.q == 2.5);
    CHECK_FALSE(verify_sign_persistence(rec).applicable);
    CHECK_FALSE(verify_riccati(rec).applicable);
  }
  SUBCASE("constant transport") {
    const auto r = run(spec, g, std::vector<double>(g.n, 0.4), c);
    const auto rec = track(spec, r, -1.0);
    REQUIRE(rec.samples.size() >= 2);
    CHECK(rec.samples.front().t == 0.0);
    CHECK(rec.samples.back().t == 1.0);
    for (const auto& s : rec.samples) CHECK(std::abs(s.q - (-1.0 + 0.4 * s.t)) <= 1e-12);
    CHECK_FALSE(rec.truncation_warning);
  }
  SUBCASE("near the periodic boundary") {
    const auto r = run(spec, g, std::vector<double>(g.n, 0.4), c);
    CHECK(track(spec, r, 14.9).truncation_warning);
  }
}

TEST_CASE("track preconditions") {
  const auto g = Grid::make(20.0, 128);
  SolverConfig c;
  c.t_end = 0.2;
  const auto r = run(preset_camassa_holm(), g, std::vector<double>(g.n, 0.0), c);
  CHECK_THROWS_AS(track(preset_rod(5.0), r, 0.0), HypothesisViolation);
  c.snapshot_stride = 6;
  const auto coarse = run(preset_camassa_holm(), g, std::vector<double>(g.n, 0.0), c);
  CHECK_THROWS_AS(track(preset_camassa_holm(), coarse, 0.0), ConfigError);
}

TEST_CASE("proof machinery along a steepening characteristic") {
  const auto spec = preset_camassa_holm();
  const auto g = Grid::make(20.0, 2048);
  SolverConfig c;
  c.t_end = 3.0;
  const auto u0 = build_initial_data({"antisym-gauss", {1.0, 1.0}}, g);
  const auto r = run(spec, g, u0, c);
  const auto rec = track(spec, r, 0.0);
  const double two_k_alpha = 2 * spec.K * rec.alpha;

  for (const auto& s : rec.samples) {
    CHECK(std::abs(s.A + s.B - 2 * two_k_alpha * phi(spec, s.u)) <= 1e-12);
    CHECK(std::abs(s.A - s.B + 2 * s.ux) <= 1e-12);
    CHECK(s.h.has_value() == (s.A * s.B < 0));
    // odd symmetry keeps the characteristic at the origin
    CHECK(std::abs(s.q) <= 1e-10);
  }
  for (std::size_t i = 1; i < rec.samples.size(); ++i)
    CHECK(rec.samples[i].t > rec.samples[i - 1].t);

  const auto sp = verify_sign_persistence(rec);
  CHECK(sp.applicable);
  CHECK(sp.within_tolerance);
  CHECK(sp.samples_checked > 10);

  const auto rc = verify_riccati(rec);
  CHECK(rc.applicable);
  CHECK(rc.amgm_violations == 0);
  CHECK(rc.h0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rc.implied_blowup_time == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rc.riccati_ok);
  CHECK(rc.comparison_ok);
  CHECK(rc.passed);
}

TEST_CASE("verifiers on hand-built records") {
  SUBCASE("exact Riccati solution passes") {
    const auto rec = riccati_record(1.0, 1.0, 1.5, 3000);
    const auto rc = verify_riccati(rec);
    CHECK(rc.passed);
    CHECK(rc.min_riccati_margin >= -1e-4);
    CHECK(rc.implied_blowup_time == 2.0);
    const auto sp = verify_sign_persistence(rec);
    CHECK(sp.monotone);
    CHECK(sp.flagged_steps == 0);
  }
  SUBCASE("a decaying h fails") {
    auto rec = riccati_record(1.0, 1.0, 1.0, 1000);
    for (auto& s : rec.samples) {
      const double y = std::exp(-s.t);
      s.ux = -y;
      s.A = y;
      s.B = -y;
      s.h = y;
    }
    const auto rc = verify_riccati(rec);
    CHECK_FALSE(rc.riccati_ok);
    CHECK_FALSE(rc.comparison_ok);
    CHECK_FALSE(rc.passed);
    const auto sp = verify_sign_persistence(rec);
    CHECK_FALSE(sp.monotone);
    CHECK(sp.within_tolerance);  // each step drops by ~1e-3 * y, inside the slack
    CHECK(sp.flagged_steps > 0);
  }
  SUBCASE("a large jump is outside the tolerance") {
    auto rec = riccati_record(1.0, 1.0, 1.0, 100);
    rec.samples[50].A -= 0.5;
    const auto sp = verify_sign_persistence(rec);
    CHECK_FALSE(sp.within_tolerance);
    CHECK(sp.worst_A_drop > 0.49);
  }
  SUBCASE("cutoff at 0.8 of the slope threshold") {
    auto rec = riccati_record(1.0, 1.0, 1.9, 1900);
    rec.slope_threshold = 10.0;
    const std::size_t cut = cutoff_index(rec);
    REQUIRE(cut < rec.samples.size());
    CHECK(std::abs(rec.samples[cut].ux) > 8.0);
    CHECK(std::abs(rec.samples[cut - 1].ux) <= 8.0);
    CHECK(verify_riccati(rec).cutoff_time == rec.samples[cut - 1].t);
  }
}
