#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hrod/grid.hpp"
#include "hrod/model.hpp"

namespace hrod {

/// CaseI: g has a global minimum (K <= 1). CaseII: global maximum (K <= 1/sqrt(8)).
enum class Branch { CaseI, CaseII, NotApplicable };

const char* to_string(Branch b);

inline constexpr double kCaseIIMaxK = 0.35355339059327373;  // 1/sqrt(8)

/// Slopes within this distance of a threshold do not count as strictly below it.
inline constexpr double kStrictnessGap = 1e-14;

/// Branch selected by the extremum kind, or NotApplicable when K is outside
/// the admissible range or g has no global extremum.
Branch branch_of(const EquationSpec& spec);

/// alpha = (sqrt(1+8K^2)-1)/(4K^2) for CaseI and (1-sqrt(1-8K^2))/(4K^2) for
/// CaseII, evaluated in cancellation-free form; 1 at K = 0.
/// Throws HypothesisViolation when K is outside the branch range.
double alpha_from_K(double K, Branch branch);

/// New local-in-space threshold -2 K alpha phi(u0), i.e.
/// -(1/(2K))(sqrt(1+8K^2)-1) phi(u0) in CaseI. Empty when not applicable.
std::optional<double> threshold_new(const EquationSpec& spec, double u0_val);

/// Prior threshold -2 K^2 alpha |u0 - c|, i.e. -(1/2)(sqrt(1+8K^2)-1)|u0-c| in CaseI.
std::optional<double> threshold_prior(const EquationSpec& spec, double u0_val);

/// True when slope < threshold by more than kStrictnessGap.
bool fires(double slope, std::optional<double> threshold);

/// The two algebraic forms of the new T* bound:
///   theorem form  4K / (gamma sqrt(4K^2 s^2 - (sqrt(1+8K^2)-1)^2 phi^2))
///   proof form    2 / (gamma sqrt(s^2 - 4K^2 alpha^2 phi^2))
/// Both are +inf when the condition does not fire. At K = 0 the theorem form
/// is taken as its limit, which equals the proof form.
struct TStarForms {
  double theorem_form;
  double proof_form;
};

TStarForms tstar_bound_new_forms(const EquationSpec& spec, double u0_val, double slope);

/// Upper bound on the blow-up time from the new criterion (proof form), or +inf.
double tstar_bound_new(const EquationSpec& spec, double u0_val, double slope);

/// 4 / (gamma sqrt(4 s^2 - (sqrt(1 +- 8K^2) - 1)^2 (u0 - c)^2)), or +inf.
double tstar_bound_prior(const EquationSpec& spec, double u0_val, double slope);

struct CriterionReport {
  double x0 = 0.0;
  double u0_at_x0 = 0.0;
  double slope_at_x0 = 0.0;
  bool applicable = false;
  Branch branch = Branch::NotApplicable;
  double alpha = 0.0;
  double K = 0.0;
  double threshold_new = 0.0;  // NaN when not applicable
  double threshold_prior = 0.0;
  bool fires_new = false;
  bool fires_prior = false;
  double tstar_bound_new = 0.0;  // +inf when not firing
  double tstar_bound_prior = 0.0;
};

CriterionReport check_point(const EquationSpec& spec, double u0_val, double slope, double x0);

struct ProfileScan {
  std::vector<CriterionReport> reports;  // sorted by x0
  std::optional<std::size_t> best;       // node with the smallest finite new bound
  double best_bound = 0.0;               // +inf when nothing fires
  bool applicable = false;
  std::size_t fired_new = 0;
  std::size_t fired_prior = 0;
};

/// check_point at every grid node using the stored u and ux. Nodes are
/// evaluated in parallel.
ProfileScan scan_profile(const EquationSpec& spec, const GridState& u0);

namespace detail {
ProfileScan summarize(const EquationSpec& spec, std::vector<CriterionReport> reports);
}

}  // namespace hrod
