#include "hrod/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <utility>

#include <omp.h>

#include "hrod/error.hpp"

namespace hrod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRangeSlack = 1e-12;

double sign_flip_term(double K, Branch branch) {
  // sqrt(1+8K^2)-1 (CaseI) or 1-sqrt(1-8K^2) (CaseII): equals 4 K^2 alpha.
  return 4.0 * K * K * alpha_from_K(K, branch);
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::CaseI: return "case-i";
    case Branch::CaseII: return "case-ii";
    case Branch::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

Branch branch_of(const EquationSpec& spec) {
  if (!(spec.gamma > 0.0) || !(spec.K >= 0.0)) return Branch::NotApplicable;
  switch (spec.extremum.kind) {
    case ExtremumKind::Min:
      return spec.K <= 1.0 + kRangeSlack ? Branch::CaseI : Branch::NotApplicable;
    case ExtremumKind::ConstantG:
      return Branch::CaseI;
    case ExtremumKind::Max:
      return spec.K <= kCaseIIMaxK + kRangeSlack ? Branch::CaseII : Branch::NotApplicable;
    case ExtremumKind::None:
      return Branch::NotApplicable;
  }
  return Branch::NotApplicable;
}

double alpha_from_K(double K, Branch branch) {
  if (!(K >= 0.0)) throw HypothesisViolation("K must be nonnegative");
  switch (branch) {
    case Branch::CaseI:
      if (K > 1.0 + kRangeSlack)
        throw HypothesisViolation("case (i) requires K <= 1, got " + std::to_string(K));
      return 2.0 / (std::sqrt(1.0 + 8.0 * K * K) + 1.0);
    case Branch::CaseII: {
      if (K > kCaseIIMaxK + kRangeSlack)
        throw HypothesisViolation("case (ii) requires K <= 1/sqrt(8), got " + std::to_string(K));
      // 1/sqrt(8) is not representable; a radicand of a few ulp is the endpoint.
      double radicand = 1.0 - 8.0 * K * K;
      if (radicand < 4.0 * std::numeric_limits<double>::epsilon()) radicand = 0.0;
      return 2.0 / (1.0 + std::sqrt(radicand));
    }
    case Branch::NotApplicable: break;
  }
  throw HypothesisViolation("alpha is undefined for a non-applicable branch");
}

std::optional<double> threshold_new(const EquationSpec& spec, double u0_val) {
  const Branch b = branch_of(spec);
  if (b == Branch::NotApplicable) return std::nullopt;
  const double K = spec.K;
  return -2.0 * K * alpha_from_K(K, b) * phi(spec, u0_val);
}

std::optional<double> threshold_prior(const EquationSpec& spec, double u0_val) {
  const Branch b = branch_of(spec);
  if (b == Branch::NotApplicable) return std::nullopt;
  const double K = spec.K;
  return -2.0 * K * K * alpha_from_K(K, b) * std::abs(u0_val - spec.extremum.c);
}

bool fires(double slope, std::optional<double> threshold) {
  if (!threshold) return false;
  return slope < *threshold && *threshold - slope > kStrictnessGap;
}

TStarForms tstar_bound_new_forms(const EquationSpec& spec, double u0_val, double slope) {
  const auto thr = threshold_new(spec, u0_val);
  if (!fires(slope, thr)) return {kInf, kInf};
  const Branch b = branch_of(spec);
  const double K = spec.K;
  const double g = spec.gamma;
  const double ph = phi(spec, u0_val);
  const double two_k_alpha = 2.0 * K * alpha_from_K(K, b);
  const double proof = 2.0 / (g * std::sqrt(slope * slope - two_k_alpha * two_k_alpha * ph * ph));
  if (K == 0.0) return {proof, proof};
  // Literal printed form; for CaseII the bracket is (sqrt(1-8K^2)-1)^2.
  const double root = b == Branch::CaseI ? std::sqrt(1.0 + 8.0 * K * K) - 1.0
                                         : 1.0 - std::sqrt(std::max(0.0, 1.0 - 8.0 * K * K));
  const double theorem =
      4.0 * K / (g * std::sqrt(4.0 * K * K * slope * slope - root * root * ph * ph));
  return {theorem, proof};
}

double tstar_bound_new(const EquationSpec& spec, double u0_val, double slope) {
  return tstar_bound_new_forms(spec, u0_val, slope).proof_form;
}

double tstar_bound_prior(const EquationSpec& spec, double u0_val, double slope) {
  const auto thr = threshold_prior(spec, u0_val);
  if (!fires(slope, thr)) return kInf;
  const double term = sign_flip_term(spec.K, branch_of(spec));
  const double d = u0_val - spec.extremum.c;
  return 4.0 / (spec.gamma * std::sqrt(4.0 * slope * slope - term * term * d * d));
}

CriterionReport check_point(const EquationSpec& spec, double u0_val, double slope, double x0) {
  CriterionReport r;
  r.x0 = x0;
  r.u0_at_x0 = u0_val;
  r.slope_at_x0 = slope;
  r.K = spec.K;
  r.branch = branch_of(spec);
  r.applicable = r.branch != Branch::NotApplicable;
  if (!r.applicable) {
    r.alpha = std::numeric_limits<double>::quiet_NaN();
    r.threshold_new = r.threshold_prior = std::numeric_limits<double>::quiet_NaN();
    r.tstar_bound_new = r.tstar_bound_prior = kInf;
    return r;
  }
  r.alpha = alpha_from_K(spec.K, r.branch);
  r.threshold_new = *threshold_new(spec, u0_val);
  r.threshold_prior = *threshold_prior(spec, u0_val);
  r.fires_new = fires(slope, r.threshold_new);
  r.fires_prior = fires(slope, r.threshold_prior);
  r.tstar_bound_new = tstar_bound_new(spec, u0_val, slope);
  r.tstar_bound_prior = tstar_bound_prior(spec, u0_val, slope);
  return r;
}

namespace detail {

ProfileScan summarize(const EquationSpec& spec, std::vector<CriterionReport> reports) {
  ProfileScan scan;
  scan.applicable = branch_of(spec) != Branch::NotApplicable;
  scan.best_bound = kInf;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    scan.fired_new += r.fires_new;
    scan.fired_prior += r.fires_prior;
    if (r.fires_new && r.tstar_bound_new < scan.best_bound) {
      scan.best_bound = r.tstar_bound_new;
      scan.best = i;
    }
  }
  scan.reports = std::move(reports);
  return scan;
}

}  // namespace detail

namespace {

std::pair<std::size_t, std::size_t> thread_block(std::size_t n) {
  const auto threads = static_cast<std::size_t>(omp_get_num_threads());
  const auto id = static_cast<std::size_t>(omp_get_thread_num());
  return {n * id / threads, n * (id + 1) / threads};
}

std::vector<CriterionReport> scan_block(const EquationSpec& spec, const GridState& u0, std::size_t lo,
                                       std::size_t hi) {
  std::vector<CriterionReport> out;
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out.push_back(check_point(spec, u0.u[i], u0.ux[i], u0.grid.x(i)));
  return out;
}

}  // namespace

ProfileScan scan_profile(const EquationSpec& spec, const GridState& u0) {
  const std::size_t n = u0.u.size();
  if (n < 3 || u0.ux.size() != n) throw InvalidParameter("scan_profile needs >= 3 nodes with ux");
  // per-thread blocks avoid zero-filling a shared vector before the writes
  std::vector<std::vector<CriterionReport>> blocks(static_cast<std::size_t>(omp_get_max_threads()));
  std::exception_ptr failure;
#pragma omp parallel num_threads(static_cast<int>(blocks.size()))
  {
    try {
      const auto [lo, hi] = thread_block(n);
      blocks[static_cast<std::size_t>(omp_get_thread_num())] = scan_block(spec, u0, lo, hi);
    } catch (...) {
#pragma omp critical(hrod_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<CriterionReport> reports = std::move(blocks.front());
  for (std::size_t b = 1; b < blocks.size(); ++b) reports.insert(reports.end(), blocks[b].begin(), blocks[b].end());
  return detail::summarize(spec, std::move(reports));
}

}  // namespace hrod
