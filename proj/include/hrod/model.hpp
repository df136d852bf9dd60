#pragma once

#include <functional>
#include <map>
#include <string>

namespace hrod {

/// A smooth scalar map together with its first two derivatives.
struct ScalarFunction {
  std::function<double(double)> eval;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;

  double operator()(double u) const { return eval(u); }
};

/// Polynomial c0 + c1 u + c2 u^2 + c3 u^3 + c4 u^4 packaged as a ScalarFunction.
ScalarFunction make_quartic(double c0, double c1, double c2, double c3, double c4);

enum class ExtremumKind { Min, Max, ConstantG, None };

/// Location c and value of the global extremum of g on the working interval.
/// `None` means no interior global extremum was found; the blow-up criteria
/// are then not applicable.
struct ExtremumData {
  ExtremumKind kind = ExtremumKind::None;
  double c = 0.0;
  double extremal_value = 0.0;
};

struct Interval {
  double lo = -10.0;
  double hi = 10.0;
};

/// Equation data (f, g) plus the hypotheses the blow-up criteria rely on.
/// Hypotheses are checked on `working_interval`, not on all of R.
struct EquationSpec {
  std::string preset;                    // "ch", "rod", "rch" or "custom"
  std::map<std::string, double> params;  // preset parameters, for manifests
  ScalarFunction f;
  ScalarFunction g;
  double gamma = 1.0;  // lower bound of f''
  ExtremumData extremum;
  double K = 0.0;  // Lipschitz constant of phi (Min) or psi (Max)
  Interval working_interval;

  /// Short human-readable identifier, e.g. "rod(gamma=2)".
  std::string id() const;
};

EquationSpec preset_camassa_holm(Interval interval = {});

/// Hyperelastic rod wave equation: f = gamma u^2/2, g = (3-gamma) u^2/2.
EquationSpec preset_rod(double gamma_param, Interval interval = {});

struct RotationChParams {
  double c0 = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double beta0 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

/// Rotation-Camassa-Holm. The extremizer of g is located numerically and K is
/// a grid estimate (see estimate_lipschitz_K).
EquationSpec preset_rotation_ch(const RotationChParams& p, Interval interval = {});

/// Builds a spec from arbitrary (f, g). Extremum and K are found numerically.
EquationSpec make_custom_spec(std::string name, ScalarFunction f, ScalarFunction g,
                              double gamma, Interval interval = {});

/// Finds the global extremum of g on the interval among the roots of g'.
/// Prefers a global minimum; falls back to a global maximum; otherwise None.
ExtremumData locate_extremum(const ScalarFunction& g, Interval interval,
                             int samples = 4001);

/// phi = sqrt((g - m)/gamma) for kind Min, psi = sqrt((M - g)/gamma) for
/// kind Max, 0 for ConstantG. Residues down to -1e-10 are clamped to zero.
double phi(const EquationSpec& spec, double u);

/// |phi'(u)| (or |psi'(u)|), using the analytic limit sqrt(|g''(c)|/(2 gamma))
/// within 1e-8 of the extremizer.
double phi_slope(const EquationSpec& spec, double u);

/// Grid estimate of the Lipschitz constant of phi on the working interval.
/// This is a lower bound of the true supremum; it is nondecreasing on nested grids.
double estimate_lipschitz_K(const EquationSpec& spec, int n);

/// min over an n-point grid of f''(u) - gamma.
double verify_convexity(const EquationSpec& spec, int n);

/// Builds a spec from flat key-value pairs:
///   preset = ch | rod | rch
///   rod.gamma, rch.c0, rch.alpha, rch.beta, rch.beta0, rch.omega1, rch.omega2
///   interval.lo, interval.hi
EquationSpec spec_from_key_values(const std::map<std::string, std::string>& kv);

/// Inverse of spec_from_key_values for the three presets.
std::map<std::string, std::string> spec_to_key_values(const EquationSpec& spec);

const char* to_string(ExtremumKind kind);

}  // namespace hrod
