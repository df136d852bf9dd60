#include "hrod/reference.hpp"

#include <vector>

#include "hrod/error.hpp"

namespace hrod::reference {

OneSidedConvolutions one_sided_convolutions(const Grid& grid, std::span<const double> w) {
  const std::size_t n = grid.n;
  if (w.size() != n) throw InvalidParameter("one_sided_convolutions: length mismatch");
  const auto weights = half_kernel_weights(grid);
  const std::size_t half = n / 2;

  OneSidedConvolutions out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= half; ++j) {
      out.plus[i] += weights[j] * w[(i + n - j) % n];
      out.minus[i] += weights[j] * w[(i + j) % n];
    }
  }
  return out;
}

ProfileScan scan_profile(const EquationSpec& spec, const GridState& u0) {
  const std::size_t n = u0.u.size();
  if (n < 3 || u0.ux.size() != n) throw InvalidParameter("scan_profile needs >= 3 nodes with ux");
  std::vector<CriterionReport> reports;
  reports.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    reports.push_back(check_point(spec, u0.u[i], u0.ux[i], u0.grid.x(i)));
  return detail::summarize(spec, std::move(reports));
}

}  // namespace hrod::reference
