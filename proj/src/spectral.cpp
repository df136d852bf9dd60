#include "hrod/spectral.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "hrod/error.hpp"

namespace hrod {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

void require_finite(std::span<const double> w, const char* what) {
  for (double v : w)
    if (!std::isfinite(v)) throw NonFinite(std::string(what) + ": non-finite input");
}

}  // namespace

Grid Grid::make(double half_length, std::size_t n) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw InvalidParameter("grid half-length must be positive");
  if (n < 64 || !std::has_single_bit(n))
    throw InvalidParameter("grid size must be a power of two >= 64, got " + std::to_string(n));
  return Grid{half_length, n};
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
  return xs;
}

double Grid::fold(double xq) const {
  const double period = 2.0 * half_length;
  double s = std::fmod(xq + half_length, period);
  if (s < 0) s += period;
  if (s >= period) s = 0.0;
  return s - half_length;
}

struct SpectralOps::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::vector<double> real_scratch;
  std::vector<std::complex<double>> complex_scratch;
};

SpectralOps::SpectralOps(const Grid& grid)
    : grid_(grid), plans_(std::make_unique<Plans>()), spectrum_(grid.n / 2 + 1) {
  plans_->real_scratch.resize(grid.n);
  plans_->complex_scratch.resize(grid.n / 2 + 1);
  const int n = static_cast<int>(grid.n);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(n, plans_->real_scratch.data(),
                                         as_fftw(plans_->complex_scratch.data()),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inverse = fftw_plan_dft_c2r_1d(n, as_fftw(plans_->complex_scratch.data()),
                                         plans_->real_scratch.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralOps::~SpectralOps() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

double SpectralOps::wavenumber(std::size_t j) const {
  return static_cast<double>(j) * std::numbers::pi / grid_.half_length;
}

void SpectralOps::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  auto& scratch = plans_->real_scratch;
  std::copy(in.begin(), in.end(), scratch.begin());
  fftw_execute_dft_r2c(plans_->forward, scratch.data(), as_fftw(out.data()));
}

void SpectralOps::inverse(std::span<std::complex<double>> in, std::span<double> out) {
  fftw_execute_dft_c2r(plans_->inverse, as_fftw(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(grid_.n);
  for (double& v : out) v *= scale;
}

void SpectralOps::derivative(std::span<const double> in, std::span<double> out) {
  forward(in, spectrum_);
  const std::size_t m = modes();
  for (std::size_t j = 0; j < m; ++j) spectrum_[j] *= std::complex<double>(0.0, wavenumber(j));
  spectrum_[m - 1] = 0.0;
  inverse(spectrum_, out);
}

void SpectralOps::helmholtz(std::span<const double> in, std::span<double> out) {
  forward(in, spectrum_);
  for (std::size_t j = 0; j < modes(); ++j) {
    const double k = wavenumber(j);
    spectrum_[j] /= 1.0 + k * k;
  }
  inverse(spectrum_, out);
}

void SpectralOps::helmholtz_derivative(std::span<const double> in, std::span<double> out) {
  forward(in, spectrum_);
  const std::size_t m = modes();
  for (std::size_t j = 0; j < m; ++j) {
    const double k = wavenumber(j);
    spectrum_[j] *= std::complex<double>(0.0, k / (1.0 + k * k));
  }
  spectrum_[m - 1] = 0.0;
  inverse(spectrum_, out);
}

double SpectralOps::tail_fraction(std::span<const double> u) {
  forward(u, spectrum_);
  const std::size_t cutoff = grid_.n / 3;
  double total = 0.0, tail = 0.0;
  for (std::size_t j = 0; j <= cutoff; ++j) {
    const double k = wavenumber(j);
    const double e = std::norm(spectrum_[j]) * (1.0 + k * k);
    total += e;
    if (j > cutoff / 2) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

std::vector<double> spectral_derivative(const Grid& grid, std::span<const double> u) {
  require_finite(u, "spectral_derivative");
  SpectralOps ops(grid);
  std::vector<double> out(grid.n);
  ops.derivative(u, out);
  return out;
}

std::vector<double> helmholtz_convolve(const Grid& grid, std::span<const double> w) {
  require_finite(w, "helmholtz_convolve");
  SpectralOps ops(grid);
  std::vector<double> out(grid.n);
  ops.helmholtz(w, out);
  return out;
}

std::vector<double> dpx_convolve(const Grid& grid, std::span<const double> w) {
  require_finite(w, "dpx_convolve");
  SpectralOps ops(grid);
  std::vector<double> out(grid.n);
  ops.helmholtz_derivative(w, out);
  return out;
}

GridState make_state(const Grid& grid, std::vector<double> u, double t) {
  if (u.size() != grid.n) throw InvalidParameter("state length does not match the grid");
  GridState s{grid, t, std::move(u), {}};
  s.ux = spectral_derivative(grid, s.u);
  return s;
}

}  // namespace hrod
