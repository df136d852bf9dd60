#pragma once

#include <string>
#include <vector>

#include "hrod/grid.hpp"

namespace hrod {

/// Named initial profile. Families and parameters:
///   zero                       u = 0
///   constant(k)                u = k
///   gaussian(a, w)             u = a exp(-x^2 / w^2)
///   antisym-gauss(a, w)        u = -a x exp(-x^2 / (2 w^2))
///   smoothed-peakon(c, eps)    u = c exp(-x tanh(x / eps))
/// Missing parameters take the family defaults.
struct InitialData {
  std::string family = "zero";
  std::vector<double> params;

  bool operator==(const InitialData&) const = default;
};

/// Throws InvalidParameter for an unknown family or too many parameters.
InitialData normalized(const InitialData& init);

double initial_value(const InitialData& init, double x);

std::vector<double> build_initial_data(const InitialData& init, const Grid& grid);

}  // namespace hrod
