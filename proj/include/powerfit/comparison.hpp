#ifndef POWERFIT_COMPARISON_HPP
#define POWERFIT_COMPARISON_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "powerfit/data.hpp"
#include "powerfit/distributions.hpp"
#include "powerfit/estimators.hpp"

namespace powerfit {

struct LrTestResult {
  double statistic = 0.0;  // -2 ln(lambda)
  double p_value = 1.0;
  int dof = 1;
  double level = 0.99;
  double critical_value = 0.0;  // chi^2_1 quantile at `level`
  bool reject_null = false;
  // Null sits on the beta = 0 edge of the parameter space, where the
  // chi-squared reference distribution is not justified.
  bool boundary_null_warning = false;
};

struct KsResult {
  double d_statistic = 0.0;
  std::int64_t argmax_x = 1;
  double critical_value_95 = 0.0;  // 1.36 / sqrt(n)
  bool reject = false;
  // The 1.36/sqrt(n) threshold comes from the continuous approximation and
  // is conservative for discrete models.
  bool conservative_threshold = true;
};

/// max(0, -2 (loglik_null - loglik_alt)). Throws NestingViolationError when
/// the alternative fits worse than the null by more than 1e-6.
double lr_statistic(double loglik_null, double loglik_alt);

/// Likelihood-ratio test of a converged one-parameter null inside a
/// converged two-parameter alternative.
LrTestResult lr_test(const FitResult &null_fit, const FitResult &alt_fit,
                     double level = 0.99);

/// Two-sided KS distance between the empirical CDF of `table` and the model,
/// evaluated on x = 1..x_max.
KsResult ks_statistic(const FrequencyTable &table, const ModelParams &params);

struct HypothesisRow {
  std::string name;   // "p_a", "p_0", "p_1"
  std::string label;  // human-readable description
  FitResult fit;
  std::optional<LrTestResult> lr;  // absent for the alternative
  KsResult ks;
};

struct ProximityDiagnostics {
  std::int64_t x_max = 0;
  double max_abs_diff = 0.0;  // max |p_0(x) - p_1(x)| over 1..x_max
  double ratio_min = 0.0;     // min p_0(x) / p_1(x)
  double ratio_max = 0.0;
};

struct ComparisonReport {
  std::int64_t n = 0;
  std::int64_t x_max = 0;
  double beta_probe = -1e-6;
  std::vector<HypothesisRow> rows;  // p_a, p_0, p_1 in that order
  ProximityDiagnostics proximity;
};

ProximityDiagnostics proximity(const PowerLawParams &p0,
                               const CutoffParams &p1, std::int64_t x_max);

/// Fits all three hypotheses and assembles the log-likelihood comparison.
ComparisonReport build_comparison_report(const FrequencyTable &table,
                                         double beta_probe = -1e-6);

}  // namespace powerfit

#endif  // POWERFIT_COMPARISON_HPP
