#pragma once

#include <cstddef>
#include <vector>

namespace hrod {

/// Periodic grid on [-L, L) with n nodes, n a power of two >= 64.
struct Grid {
  double half_length = 20.0;
  std::size_t n = 1024;

  /// Validates L > 0 and n; throws InvalidParameter otherwise.
  static Grid make(double half_length, std::size_t n);

  double dx() const { return 2.0 * half_length / static_cast<double>(n); }
  double x(std::size_t j) const { return -half_length + static_cast<double>(j) * dx(); }
  std::vector<double> nodes() const;

  /// Maps x into [-L, L).
  double fold(double x) const;
};

/// Nodal values of u at time t together with the cached spectral derivative.
struct GridState {
  Grid grid;
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> ux;
};

}  // namespace hrod
