#include "hrod/initial_data.hpp"

#include <cmath>
#include <map>

#include "hrod/error.hpp"

namespace hrod {

namespace {

const std::map<std::string, std::vector<double>>& family_defaults() {
  static const std::map<std::string, std::vector<double>> defaults = {
      {"zero", {}},
      {"constant", {0.0}},
      {"gaussian", {0.5, 2.0}},
      {"antisym-gauss", {1.0, 1.0}},
      {"smoothed-peakon", {0.5, 0.1}},
  };
  return defaults;
}

}  // namespace

InitialData normalized(const InitialData& init) {
  const auto& defaults = family_defaults();
  auto it = defaults.find(init.family);
  if (it == defaults.end()) throw InvalidParameter("unknown initial-data family '" + init.family + "'");
  if (init.params.size() > it->second.size())
    throw InvalidParameter("too many parameters for '" + init.family + "'");
  InitialData out{init.family, it->second};
  for (std::size_t i = 0; i < init.params.size(); ++i) out.params[i] = init.params[i];
  return out;
}

double initial_value(const InitialData& init, double x) {
  const InitialData d = normalized(init);
  const auto& p = d.params;
  if (d.family == "zero") return 0.0;
  if (d.family == "constant") return p[0];
  if (d.family == "gaussian") return p[0] * std::exp(-x * x / (p[1] * p[1]));
  if (d.family == "antisym-gauss") return -p[0] * x * std::exp(-x * x / (2.0 * p[1] * p[1]));
  // smoothed-peakon: x tanh(x/eps) is a smooth stand-in for |x|.
  return p[0] * std::exp(-x * std::tanh(x / p[1]));
}

std::vector<double> build_initial_data(const InitialData& init, const Grid& grid) {
  const InitialData d = normalized(init);
  if (d.family == "smoothed-peakon" && !(d.params[1] > 0.0))
    throw InvalidParameter("smoothed-peakon needs eps > 0");
  if ((d.family == "gaussian" || d.family == "antisym-gauss") && d.params[1] == 0.0)
    throw InvalidParameter(d.family + " needs a nonzero width");
  std::vector<double> u(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) u[j] = initial_value(d, grid.x(j));
  return u;
}

}  // namespace hrod
