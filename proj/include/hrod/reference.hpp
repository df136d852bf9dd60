#pragma once

#include <span>

#include "hrod/criterion.hpp"
#include "hrod/kernels.hpp"

/// Serial versions of the OpenMP kernels. Tests compare the parallel paths
/// against these; the benchmark times both.
namespace hrod::reference {

OneSidedConvolutions one_sided_convolutions(const Grid& grid, std::span<const double> w);

ProfileScan scan_profile(const EquationSpec& spec, const GridState& u0);

}  // namespace hrod::reference
