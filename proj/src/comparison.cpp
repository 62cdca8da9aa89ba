#include "powerfit/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "powerfit/errors.hpp"
#include "powerfit/specfun.hpp"

namespace powerfit {

namespace {

constexpr double kNestingSlack = 1e-6;
constexpr double kKsCoefficient95 = 1.36;

}  // namespace

double lr_statistic(double loglik_null, double loglik_alt) {
  if (!std::isfinite(loglik_null) || !std::isfinite(loglik_alt)) {
    throw InvalidParamsError("log-likelihoods must be finite");
  }
  if (loglik_alt < loglik_null - kNestingSlack) {
    throw NestingViolationError(
        "alternative log-likelihood is below the null; the fit upstream failed");
  }
  return std::max(0.0, -2.0 * (loglik_null - loglik_alt));
}

LrTestResult lr_test(const FitResult &null_fit, const FitResult &alt_fit,
                     double level) {
  if (!null_fit.converged || !alt_fit.converged) {
    throw NotConvergedError("LR test needs converged fits");
  }
  if (!null_fit.log_likelihood || !alt_fit.log_likelihood) {
    throw InvalidParamsError("LR test needs maximum-likelihood fits");
  }
  const int dof = alt_fit.free_parameters() - null_fit.free_parameters();
  if (dof != 1) {
    throw InvalidParamsError("LR test expects a 1-parameter null in a "
                             "2-parameter alternative");
  }
  LrTestResult r;
  r.statistic = lr_statistic(*null_fit.log_likelihood, *alt_fit.log_likelihood);
  r.p_value = specfun::chi2_sf_1dof(r.statistic);
  r.dof = dof;
  r.level = level;
  r.critical_value = specfun::chi2_quantile_1dof(level);
  r.reject_null = r.statistic > r.critical_value;
  r.boundary_null_warning = null_fit.method == FitMethod::MlePowerLaw ||
                            (null_fit.beta && *null_fit.beta == 0.0);
  return r;
}

KsResult ks_statistic(const FrequencyTable &table, const ModelParams &params) {
  const DiscreteModel model(params);
  const auto model_cdf = model.cdf_table(table.x_max());
  const double n = static_cast<double>(table.n());
  KsResult r;
  std::int64_t below = 0;
  auto row = table.rows().begin();
  for (std::int64_t x = 1; x <= table.x_max(); ++x) {
    if (row != table.rows().end() && row->x == x) {
      below += row->count;
      ++row;
    }
    const double gap =
        std::fabs(static_cast<double>(below) / n - model_cdf[x - 1]);
    if (gap > r.d_statistic) {
      r.d_statistic = gap;
      r.argmax_x = x;
    }
  }
  r.critical_value_95 = kKsCoefficient95 / std::sqrt(n);
  r.reject = r.d_statistic > r.critical_value_95;
  return r;
}

ProximityDiagnostics proximity(const PowerLawParams &p0,
                               const CutoffParams &p1, std::int64_t x_max) {
  const DiscreteModel m0(p0);
  const DiscreteModel m1(p1);
  ProximityDiagnostics d;
  d.x_max = x_max;
  d.ratio_min = std::numeric_limits<double>::infinity();
  d.ratio_max = -std::numeric_limits<double>::infinity();
  for (std::int64_t x = 1; x <= x_max; ++x) {
    const double a = m0.pmf(x);
    const double b = m1.pmf(x);
    d.max_abs_diff = std::max(d.max_abs_diff, std::fabs(a - b));
    const double ratio = std::exp(m0.log_pmf(x) - m1.log_pmf(x));
    d.ratio_min = std::min(d.ratio_min, ratio);
    d.ratio_max = std::max(d.ratio_max, ratio);
  }
  return d;
}

ComparisonReport build_comparison_report(const FrequencyTable &table,
                                         double beta_probe) {
  if (!(beta_probe < 0.0)) throw InvalidParamsError("beta_probe must be < 0");
  const auto stats = sufficient_stats(table);

  const FitResult cutoff = fit_mle_cutoff(stats);
  const FitResult power = fit_mle_power_law(stats);
  const FitResult fixed = fit_mle_fixed_beta(stats, beta_probe);

  ComparisonReport report;
  report.n = table.n();
  report.x_max = table.x_max();
  report.beta_probe = beta_probe;

  report.rows.push_back({"p_a", "general exponential cutoff", cutoff,
                         std::nullopt, ks_statistic(table, cutoff.model())});
  report.rows.push_back({"p_0", "beta = 0, discrete power law", power,
                         lr_test(power, cutoff), ks_statistic(table, power.model())});
  report.rows.push_back({"p_1", "beta = beta_probe, virtual power law", fixed,
                         lr_test(fixed, cutoff), ks_statistic(table, fixed.model())});
  report.proximity = proximity(PowerLawParams{power.alpha},
                               CutoffParams{fixed.alpha, *fixed.beta},
                               table.x_max());
  return report;
}

}  // namespace powerfit
