#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hrod/error.hpp"
#include "hrod/spectral.hpp"

using namespace hrod;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

template <class F>
std::vector<double> sample(const Grid& g, F f) {
  std::vector<double> v(g.n);
  for (std::size_t j = 0; j < g.n; ++j) v[j] = f(g.x(j));
  return v;
}

// cosh(|x| - L) / (2 sinh L) for x in [-L, L]
double periodic_green(double x, double L) {
  return std::cosh(std::abs(x) - L) / (2 * std::sinh(L));
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = Grid::make(20.0, 1024);
  CHECK(g.dx() * 1024 == 40.0);
  CHECK(g.x(0) == -20.0);
  CHECK(g.x(512) == 0.0);
  CHECK(g.nodes().size() == 1024);
  CHECK(g.fold(20.0) == -20.0);
  CHECK(g.fold(1.5 + 40.0) == doctest::Approx(1.5));
  CHECK(g.fold(-21.0) == doctest::Approx(19.0));
  CHECK_THROWS_AS(Grid::make(20.0, 32), InvalidParameter);
  CHECK_THROWS_AS(Grid::make(20.0, 1000), InvalidParameter);
  CHECK_THROWS_AS(Grid::make(0.0, 1024), InvalidParameter);
}

TEST_CASE("helmholtz eigenvalues on cosines") {
  const auto g = Grid::make(20.0, 1024);
  CHECK(sup_diff(helmholtz_convolve(g, std::vector<double>(g.n, 1.0)),
                 std::vector<double>(g.n, 1.0)) <= 1e-14);
  for (int k0 : {1, 3, 10, 40, 200}) {
    const double k = k0 * std::numbers::pi / g.half_length;
    const auto w = sample(g, [&](double x) { return std::cos(k * x); });
    const auto expect = sample(g, [&](double x) { return std::cos(k * x) / (1 + k * k); });
    CAPTURE(k0);
    CHECK(sup_diff(helmholtz_convolve(g, w), expect) <= 1e-12);
    const auto dexp = sample(g, [&](double x) { return -k * std::sin(k * x) / (1 + k * k); });
    CHECK(sup_diff(dpx_convolve(g, w), dexp) <= 1e-12);
  }
}

TEST_CASE("dpx of a constant vanishes and parity flips") {
  const auto g = Grid::make(20.0, 512);
  CHECK(sup_diff(dpx_convolve(g, std::vector<double>(g.n, 3.0)), std::vector<double>(g.n, 0.0)) <=
        1e-14);
  const auto odd = sample(g, [](double x) { return x * std::exp(-x * x / 3); });
  const auto out = dpx_convolve(g, odd);
  // node j mirrors node n - j about x = 0
  double asym = 0.0;
  for (std::size_t j = 1; j < g.n; ++j) asym = std::max(asym, std::abs(out[j] - out[g.n - j]));
  CHECK(asym <= 1e-14);
}

TEST_CASE("helmholtz against the closed-form periodic kernel on smooth data") {
  // (p_per * w)(x_i) by dense quadrature of the smooth integrand on a 16x finer grid
  const auto g = Grid::make(10.0, 256);
  auto w = [](double x) { return std::exp(-x * x) * (1 + 0.5 * std::sin(2 * x)); };
  const auto out = helmholtz_convolve(g, sample(g, w));
  const int m = 16 * static_cast<int>(g.n);
  const double h = 2 * g.half_length / m;
  double err = 0.0;
  for (std::size_t i = 0; i < g.n; i += 8) {
    const double xi = g.x(i);
    // start the periodic sweep at the kernel kink y = xi
    long double acc = 0.0L;
    for (int q = 0; q < m; ++q) {
      const double y = xi + q * h;  // y - xi in [0, 2L)
      acc += periodic_green(g.fold(xi - y), g.half_length) * w(g.fold(y));
    }
    err = std::max(err, std::abs(static_cast<double>(acc) * h - out[i]));
  }
  // trapezoid rule on the kink-aligned periodic grid is O(h^2) with constant |p'| jump / 12
  CHECK(err <= 1e-5);
}

TEST_CASE("spectral derivative is exact on band-limited data") {
  const auto g = Grid::make(std::numbers::pi, 64);
  const auto u = sample(g, [](double x) { return std::sin(3 * x) + 0.25 * std::cos(7 * x); });
  const auto d = sample(g, [](double x) { return 3 * std::cos(3 * x) - 1.75 * std::sin(7 * x); });
  CHECK(sup_diff(spectral_derivative(g, u), d) <= 1e-12);
  const auto st = make_state(g, u, 0.5);
  CHECK(st.t == 0.5);
  CHECK(sup_diff(st.ux, d) <= 1e-12);
}

TEST_CASE("non-finite input is rejected") {
  const auto g = Grid::make(20.0, 64);
  std::vector<double> w(g.n, 0.0);
  w[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(helmholtz_convolve(g, w), NonFinite);
  CHECK_THROWS_AS(dpx_convolve(g, w), NonFinite);
  CHECK_THROWS_AS(spectral_derivative(g, w), NonFinite);
  w[5] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(helmholtz_convolve(g, w), NonFinite);
}

TEST_CASE("tail fraction separates resolved from rough data") {
  const auto g = Grid::make(20.0, 1024);
  SpectralOps ops(g);
  const auto smooth = sample(g, [](double x) { return std::exp(-x * x / 4); });
  CHECK(ops.tail_fraction(smooth) < 1e-12);
  const auto kinked = sample(g, [](double x) { return std::exp(-std::abs(x)); });
  CHECK(ops.tail_fraction(kinked) > 1e-4);
  CHECK(ops.tail_fraction(std::vector<double>(g.n, 0.0)) == 0.0);
  CHECK(ops.dealiased_out(g.n / 3 + 1));
  CHECK_FALSE(ops.dealiased_out(g.n / 3));
  CHECK(ops.wavenumber(2) == doctest::Approx(2 * std::numbers::pi / 20.0));
}

TEST_CASE("forward and inverse round trip") {
  const auto g = Grid::make(5.0, 128);
  SpectralOps ops(g);
  const auto u = sample(g, [](double x) { return std::tanh(x) * std::exp(-x * x); });
  std::vector<std::complex<double>> hat(ops.modes());
  std::vector<double> back(g.n);
  ops.forward(u, hat);
  ops.inverse(hat, back);
  CHECK(sup_diff(u, back) <= 1e-15);
}
