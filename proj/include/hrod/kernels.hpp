#pragma once

#include <span>
#include <vector>

#include "hrod/grid.hpp"

namespace hrod {

/// Convolutions of w with the two halves of p(x) = e^{-|x|}/2:
///   plus[i]  = ((p 1_{x>0}) * w)(x_i) = int_0^L  p(z) w(x_i - z) dz
///   minus[i] = ((p 1_{x<0}) * w)(x_i) = int_0^L  p(z) w(x_i + z) dz
/// w is periodic on the grid; the integrals use the trapezoid rule on the
/// single-period window |z| <= L. p = plus + minus up to the window cut.
struct OneSidedConvolutions {
  std::vector<double> plus;
  std::vector<double> minus;
};

/// O(n^2) quadrature, parallel over output nodes.
OneSidedConvolutions one_sided_convolutions(const Grid& grid, std::span<const double> w);

/// Trapezoid weights dx * c_j * e^{-j dx}/2 for j = 0..n/2, c_0 = c_{n/2} = 1/2.
std::vector<double> half_kernel_weights(const Grid& grid);

}  // namespace hrod
