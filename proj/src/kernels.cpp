#include "hrod/kernels.hpp"

#include <cmath>
#include <cstddef>

#include "hrod/error.hpp"

namespace hrod {

std::vector<double> half_kernel_weights(const Grid& grid) {
  const std::size_t half = grid.n / 2;
  const double dx = grid.dx();
  std::vector<double> weights(half + 1);
  for (std::size_t j = 0; j <= half; ++j)
    weights[j] = dx * 0.5 * std::exp(-static_cast<double>(j) * dx);
  weights[0] *= 0.5;
  weights[half] *= 0.5;
  return weights;
}

OneSidedConvolutions one_sided_convolutions(const Grid& grid, std::span<const double> w) {
  const std::size_t n = grid.n;
  if (w.size() != n) throw InvalidParameter("one_sided_convolutions: length mismatch");
  const auto weights = half_kernel_weights(grid);
  const std::size_t half = n / 2;
  const std::size_t mask = n - 1;  // n is a power of two

  OneSidedConvolutions out{std::vector<double>(n), std::vector<double>(n)};
  const double* wp = w.data();
  const double* kp = weights.data();
  double* plus = out.plus.data();
  double* minus = out.minus.data();
  const auto count = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double left = 0.0, right = 0.0;
#pragma omp simd reduction(+ : left, right)
    for (std::size_t j = 0; j <= half; ++j) {
      left += kp[j] * wp[(i - j) & mask];
      right += kp[j] * wp[(i + j) & mask];
    }
    plus[i] = left;
    minus[i] = right;
  }
  return out;
}

}  // namespace hrod
