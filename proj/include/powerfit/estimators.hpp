#ifndef POWERFIT_ESTIMATORS_HPP
#define POWERFIT_ESTIMATORS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "powerfit/data.hpp"
#include "powerfit/distributions.hpp"

namespace powerfit {

enum class FitMethod {
  OlsLogLog,       // ln y = -alpha ln x + b
  ConstrainedOls,  // ln y = -alpha ln x - ln zeta(alpha)
  Nls,             // y = e^b x^-alpha
  ConstrainedNls,  // y = x^-alpha / zeta(alpha)
  MlePowerLaw,
  MleCutoff,
  MleFixedBeta,
};

/// CLI spelling, e.g. "mle-powerlaw".
std::string_view to_string(FitMethod method);
std::optional<FitMethod> parse_fit_method(std::string_view name);

struct FitResult {
  FitMethod method = FitMethod::OlsLogLog;
  double alpha = 0.0;
  std::optional<double> b;     // OlsLogLog and Nls only
  std::optional<double> beta;  // cutoff methods only
  std::optional<double> log_likelihood;  // MLE methods only
  // Residual sum of squares for the curve fits, log-likelihood for MLE.
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  // Per-observation score norm at the optimum (MLE methods).
  std::optional<double> gradient_norm;

  /// Model implied by an MLE fit (power law or cutoff).
  ModelParams model() const;
  /// Number of free parameters of the fitted family.
  int free_parameters() const;
};

FitResult fit_ols_loglog(const CurveData &curve);
FitResult fit_constrained_ols(const CurveData &curve);
FitResult fit_nls(const CurveData &curve);
FitResult fit_constrained_nls(const CurveData &curve);

FitResult fit_mle_power_law(const SufficientStats &stats);
/// Throws BoundaryError when the likelihood is maximised at beta -> 0-.
FitResult fit_mle_cutoff(const SufficientStats &stats);
FitResult fit_mle_fixed_beta(const SufficientStats &stats, double beta);

/// Dispatch by method; `beta` is only read for MleFixedBeta.
FitResult fit(FitMethod method, const FrequencyTable &table,
              const CurveData &curve, double beta = -1e-6);

// Objectives, exposed for grid-scan verification.
namespace objective {

double ols_rss(const CurveData &curve, double alpha, double b);
double constrained_ols_rss(const CurveData &curve, double alpha);
double nls_rss(const CurveData &curve, double alpha, double b);
double constrained_nls_rss(const CurveData &curve, double alpha);

/// -alpha sum ln z - n ln zeta(alpha)
double loglik_power_law(const SufficientStats &stats, double alpha);
/// beta sum z - alpha sum ln z - n ln Li_alpha(e^beta)
double loglik_cutoff(const SufficientStats &stats, double alpha, double beta);

/// Per-observation score of the cutoff likelihood:
/// {d/dalpha, d/dbeta} of loglik_cutoff / n.
std::array<double, 2> cutoff_score(const SufficientStats &stats, double alpha,
                                   double beta);
/// d/dalpha of loglik_power_law / n.
double power_law_score(const SufficientStats &stats, double alpha);

}  // namespace objective

}  // namespace powerfit

#endif  // POWERFIT_ESTIMATORS_HPP
