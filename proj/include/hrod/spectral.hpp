#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "hrod/grid.hpp"

namespace hrod {

/// Fourier-space operators on a periodic Grid. Owns FFT plans and scratch
/// buffers, so one instance must not be used from two threads at once.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);
  ~SpectralOps();
  SpectralOps(SpectralOps&&) noexcept;
  SpectralOps& operator=(SpectralOps&&) noexcept;
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const { return grid_; }
  std::size_t modes() const { return grid_.n / 2 + 1; }
  /// Angular wavenumber of mode j: j*pi/L.
  double wavenumber(std::size_t j) const;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Inverse transform including the 1/n normalization. Clobbers `in`.
  void inverse(std::span<std::complex<double>> in, std::span<double> out);

  /// d/dx, Nyquist mode dropped.
  void derivative(std::span<const double> in, std::span<double> out);
  /// (1 - d^2/dx^2)^{-1}, i.e. convolution with the periodized kernel e^{-|x|}/2.
  void helmholtz(std::span<const double> in, std::span<double> out);
  /// d/dx (1 - d^2/dx^2)^{-1}.
  void helmholtz_derivative(std::span<const double> in, std::span<double> out);

  /// True for modes discarded by the 2/3 rule.
  bool dealiased_out(std::size_t j) const { return j > grid_.n / 3; }

  /// Fraction of the H1 spectral energy carried by the upper half of the
  /// retained (2/3-rule) band. Small for resolved data.
  double tail_fraction(std::span<const double> u);

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
  std::vector<std::complex<double>> spectrum_;
};

/// One-shot wrappers that build their own SpectralOps.
std::vector<double> spectral_derivative(const Grid& grid, std::span<const double> u);
std::vector<double> helmholtz_convolve(const Grid& grid, std::span<const double> w);
std::vector<double> dpx_convolve(const Grid& grid, std::span<const double> w);

/// Builds a GridState with ux filled spectrally.
GridState make_state(const Grid& grid, std::vector<double> u, double t = 0.0);

}  // namespace hrod
