#include "hrod/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "hrod/error.hpp"

namespace hrod {

namespace {

constexpr double kClampWindow = 1e-10;
constexpr double kExtremizerWindow = 1e-8;
constexpr int kRchLipschitzSamples = 20001;

double parse_number(const std::map<std::string, std::string>& kv, const std::string& key,
                    double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used == 0) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "' is not a number: " + it->second);
  }
}

Interval interval_from(const std::map<std::string, std::string>& kv) {
  Interval iv;
  iv.lo = parse_number(kv, "interval.lo", iv.lo);
  iv.hi = parse_number(kv, "interval.hi", iv.hi);
  if (!(iv.lo < iv.hi)) throw InvalidParameter("interval.lo must be below interval.hi");
  return iv;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScalarFunction make_quartic(double c0, double c1, double c2, double c3, double c4) {
  ScalarFunction fn;
  fn.eval = [=](double u) { return c0 + u * (c1 + u * (c2 + u * (c3 + u * c4))); };
  fn.deriv1 = [=](double u) { return c1 + u * (2 * c2 + u * (3 * c3 + u * 4 * c4)); };
  fn.deriv2 = [=](double u) { return 2 * c2 + u * (6 * c3 + u * 12 * c4); };
  return fn;
}

std::string EquationSpec::id() const {
  std::string out = preset;
  if (params.empty()) return out;
  out += '(';
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out += ';';
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", k.c_str(), v);
    out += buf;
  }
  out += ')';
  return out;
}

const char* to_string(ExtremumKind kind) {
  switch (kind) {
    case ExtremumKind::Min: return "min";
    case ExtremumKind::Max: return "max";
    case ExtremumKind::ConstantG: return "constant";
    case ExtremumKind::None: return "none";
  }
  return "none";
}

EquationSpec preset_camassa_holm(Interval interval) {
  EquationSpec s;
  s.preset = "ch";
  s.f = make_quartic(0, 0, 0.5, 0, 0);
  s.g = make_quartic(0, 0, 1, 0, 0);
  s.gamma = 1.0;
  s.extremum = {ExtremumKind::Min, 0.0, 0.0};
  s.K = 1.0;
  s.working_interval = interval;
  return s;
}

EquationSpec preset_rod(double gamma_param, Interval interval) {
  if (!(gamma_param > 0.0) || !std::isfinite(gamma_param))
    throw InvalidParameter("rod gamma must be positive, got " + format_number(gamma_param));
  EquationSpec s;
  s.preset = "rod";
  s.params["gamma"] = gamma_param;
  s.f = make_quartic(0, 0, gamma_param / 2, 0, 0);
  s.g = make_quartic(0, 0, (3 - gamma_param) / 2, 0, 0);
  s.gamma = gamma_param;
  if (gamma_param < 3)
    s.extremum = {ExtremumKind::Min, 0.0, 0.0};
  else if (gamma_param > 3)
    s.extremum = {ExtremumKind::Max, 0.0, 0.0};
  else
    s.extremum = {ExtremumKind::ConstantG, 0.0, 0.0};
  s.K = std::sqrt(std::abs(3 - gamma_param) / (2 * gamma_param));
  s.working_interval = interval;
  return s;
}

EquationSpec preset_rotation_ch(const RotationChParams& p, Interval interval) {
  if (p.alpha == 0.0) throw InvalidParameter("rotation-CH alpha must be nonzero");
  if (p.beta == 0.0) throw InvalidParameter("rotation-CH beta must be nonzero");
  const double drift = p.beta0 / p.beta;
  EquationSpec s;
  s.preset = "rch";
  s.params = {{"c0", p.c0},         {"alpha", p.alpha},   {"beta", p.beta},
              {"beta0", p.beta0},   {"omega1", p.omega1}, {"omega2", p.omega2}};
  s.f = make_quartic(0, drift, 0.5, 0, 0);
  s.g = make_quartic(0, p.c0 - drift, 1.0, p.omega1 / (3 * p.alpha * p.alpha),
                     p.omega2 / (4 * p.alpha * p.alpha * p.alpha));
  s.gamma = 1.0;
  s.working_interval = interval;
  s.extremum = locate_extremum(s.g, interval);
  s.K = s.extremum.kind == ExtremumKind::None ? 0.0
                                                : estimate_lipschitz_K(s, kRchLipschitzSamples);
  return s;
}

EquationSpec make_custom_spec(std::string name, ScalarFunction f, ScalarFunction g,
                              double gamma, Interval interval) {
  if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
  EquationSpec s;
  s.preset = std::move(name);
  s.f = std::move(f);
  s.g = std::move(g);
  s.gamma = gamma;
  s.working_interval = interval;
  s.extremum = locate_extremum(s.g, interval);
  s.K = s.extremum.kind == ExtremumKind::None ? 0.0
                                                : estimate_lipschitz_K(s, kRchLipschitzSamples);
  return s;
}

ExtremumData locate_extremum(const ScalarFunction& g, Interval iv, int samples) {
  if (samples < 3) samples = 3;
  const double h = (iv.hi - iv.lo) / (samples - 1);
  std::vector<double> us(samples), dg(samples), gs(samples);
  for (int i = 0; i < samples; ++i) {
    us[i] = iv.lo + i * h;
    dg[i] = g.deriv1(us[i]);
    gs[i] = g.eval(us[i]);
  }

  double gmin = *std::min_element(gs.begin(), gs.end());
  double gmax = *std::max_element(gs.begin(), gs.end());
  const double scale = std::max({1.0, std::abs(gmin), std::abs(gmax)});
  if (gmax - gmin <= 1e-14 * scale) return {ExtremumKind::ConstantG, 0.5 * (iv.lo + iv.hi), gs[0]};

  std::vector<double> roots;
  for (int i = 0; i + 1 < samples; ++i) {
    if (dg[i] == 0.0) {
      roots.push_back(us[i]);
      continue;
    }
    if (dg[i + 1] == 0.0 || (dg[i] > 0) == (dg[i + 1] > 0)) continue;
    double a = us[i], b = us[i + 1], fa = dg[i];
    while (b - a > 1e-12) {
      double mid = 0.5 * (a + b);
      double fm = g.deriv1(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    double c = 0.5 * (a + b);
    // Newton polish; keeps exact roots like c = 0 for g = u^2.
    for (int it = 0; it < 3; ++it) {
      double d2 = g.deriv2(c);
      if (d2 == 0.0) break;
      double next = c - g.deriv1(c) / d2;
      if (!(std::abs(next - c) <= 1e-9) || std::abs(g.deriv1(next)) > std::abs(g.deriv1(c)))
        break;
      c = next;
    }
    roots.push_back(c);
  }
  if (roots.empty()) return {};

  auto best_min = std::min_element(roots.begin(), roots.end(),
                                   [&](double x, double y) { return g(x) < g(y); });
  const double tol = 1e-12 * scale;
  if (g(*best_min) <= gmin + tol) return {ExtremumKind::Min, *best_min, g(*best_min)};

  auto best_max = std::max_element(roots.begin(), roots.end(),
                                   [&](double x, double y) { return g(x) < g(y); });
  if (g(*best_max) >= gmax - tol) return {ExtremumKind::Max, *best_max, g(*best_max)};
  return {};
}

double phi(const EquationSpec& spec, double u) {
  const auto& ex = spec.extremum;
  double gap = 0.0;
  switch (ex.kind) {
    case ExtremumKind::ConstantG: return 0.0;
    case ExtremumKind::None:
      throw HypothesisViolation("phi is undefined: g has no global extremum on the interval");
    case ExtremumKind::Min: gap = spec.g(u) - ex.extremal_value; break;
    case ExtremumKind::Max: gap = ex.extremal_value - spec.g(u); break;
  }
  if (gap < 0.0) {
    if (gap < -kClampWindow * std::max(1.0, std::abs(ex.extremal_value)))
      throw ExtremumViolation("g crosses its recorded extremum at u = " + format_number(u));
    gap = 0.0;
  }
  return std::sqrt(gap / spec.gamma);
}

double phi_slope(const EquationSpec& spec, double u) {
  const auto& ex = spec.extremum;
  if (ex.kind == ExtremumKind::ConstantG) return 0.0;
  if (ex.kind == ExtremumKind::None)
    throw HypothesisViolation("phi is undefined: g has no global extremum on the interval");
  const double limit = std::sqrt(std::abs(spec.g.deriv2(ex.c)) / (2 * spec.gamma));
  if (std::abs(u - ex.c) < kExtremizerWindow) return limit;
  double gap = ex.kind == ExtremumKind::Min ? spec.g(u) - ex.extremal_value
                                            : ex.extremal_value - spec.g(u);
  if (gap <= 0.0) return limit;
  return std::abs(spec.g.deriv1(u)) / (2 * std::sqrt(spec.gamma * gap));
}

double estimate_lipschitz_K(const EquationSpec& spec, int n) {
  if (n < 2) throw InvalidParameter("estimate_lipschitz_K needs n >= 2");
  if (spec.extremum.kind == ExtremumKind::ConstantG) return 0.0;
  const auto& iv = spec.working_interval;
  const double h = (iv.hi - iv.lo) / (n - 1);
  double k = 0.0;
  for (int i = 0; i < n; ++i) k = std::max(k, phi_slope(spec, iv.lo + i * h));
  return k;
}

double verify_convexity(const EquationSpec& spec, int n) {
  if (n < 2) throw InvalidParameter("verify_convexity needs n >= 2");
  const auto& iv = spec.working_interval;
  const double h = (iv.hi - iv.lo) / (n - 1);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) margin = std::min(margin, spec.f.deriv2(iv.lo + i * h) - spec.gamma);
  return margin;
}

EquationSpec spec_from_key_values(const std::map<std::string, std::string>& kv) {
  auto it = kv.find("preset");
  const std::string preset = it == kv.end() ? "ch" : it->second;
  const Interval iv = interval_from(kv);
  if (preset == "ch") return preset_camassa_holm(iv);
  if (preset == "rod") return preset_rod(parse_number(kv, "rod.gamma", 2.0), iv);
  if (preset == "rch") {
    RotationChParams p;
    p.c0 = parse_number(kv, "rch.c0", p.c0);
    p.alpha = parse_number(kv, "rch.alpha", p.alpha);
    p.beta = parse_number(kv, "rch.beta", p.beta);
    p.beta0 = parse_number(kv, "rch.beta0", p.beta0);
    p.omega1 = parse_number(kv, "rch.omega1", p.omega1);
    p.omega2 = parse_number(kv, "rch.omega2", p.omega2);
    return preset_rotation_ch(p, iv);
  }
  throw InvalidParameter("unknown preset '" + preset + "'");
}

std::map<std::string, std::string> spec_to_key_values(const EquationSpec& spec) {
  std::map<std::string, std::string> kv;
  kv["preset"] = spec.preset;
  kv["interval.lo"] = format_number(spec.working_interval.lo);
  kv["interval.hi"] = format_number(spec.working_interval.hi);
  for (const auto& [k, v] : spec.params) kv[spec.preset + "." + k] = format_number(v);
  return kv;
}

}  // namespace hrod
