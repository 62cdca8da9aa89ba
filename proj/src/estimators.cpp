#include "powerfit/estimators.hpp"

#include <array>
#include <cmath>
#include <string>

#include "powerfit/errors.hpp"
#include "powerfit/optimize.hpp"
#include "powerfit/specfun.hpp"

namespace powerfit {

namespace {

constexpr double kAlphaLo = 1.0 + 1e-6;
constexpr double kAlphaHi = 50.0;
constexpr double kXtol = 1e-10;
constexpr int kScanPoints = 160;
// Below this |beta| the cutoff maximiser is treated as having hit the
// beta = 0 edge.
constexpr double kBoundaryBeta = 1e-12;

void require_positive_y(const CurveData &curve, std::size_t min_points) {
  if (curve.points.size() < min_points) {
    throw DegenerateInputError("need at least " + std::to_string(min_points) +
                               " curve points");
  }
  for (const auto &p : curve.points) {
    if (p.x < 1) throw InvalidParamsError("curve x must be >= 1");
    if (!(p.y > 0.0) || !std::isfinite(p.y)) {
      throw InvalidParamsError("curve y must be positive and finite at x = " +
                               std::to_string(p.x));
    }
  }
}

double log_zeta(double alpha) { return std::log(specfun::zeta(alpha).value); }

optimize::Minimum1d minimize_alpha(const std::function<double(double)> &f) {
  auto m = optimize::scan_then_brent(f, kAlphaLo, kAlphaHi, kScanPoints, true,
                                     kXtol);
  if (!m.converged) throw ConvergenceError("1-D minimisation did not converge");
  return m;
}

void require_stats(const SufficientStats &s) {
  if (s.n < 1) throw DegenerateInputError("empty sample");
}

// Newton polish of a 1-D score root, with the derivative of the score taken
// by central differences. Keeps the better of the start and the polished
// point by |score|.
double polish_root(const std::function<double(double)> &score, double x,
                   int steps = 3) {
  for (int i = 0; i < steps; ++i) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x));
    const double g = score(x);
    const double dg = (score(x + h) - score(x - h)) / (2.0 * h);
    if (!(dg < 0.0) || !std::isfinite(dg)) break;
    const double next = x - g / dg;
    if (!(std::fabs(score(next)) <= std::fabs(g))) break;
    x = next;
  }
  return x;
}

}  // namespace

std::string_view to_string(FitMethod method) {
  switch (method) {
    case FitMethod::OlsLogLog: return "ols-loglog";
    case FitMethod::ConstrainedOls: return "constrained-ols";
    case FitMethod::Nls: return "nls";
    case FitMethod::ConstrainedNls: return "constrained-nls";
    case FitMethod::MlePowerLaw: return "mle-powerlaw";
    case FitMethod::MleCutoff: return "mle-cutoff";
    case FitMethod::MleFixedBeta: return "mle-fixed-beta";
  }
  return "unknown";
}

std::optional<FitMethod> parse_fit_method(std::string_view name) {
  for (auto m : {FitMethod::OlsLogLog, FitMethod::ConstrainedOls,
                 FitMethod::Nls, FitMethod::ConstrainedNls,
                 FitMethod::MlePowerLaw, FitMethod::MleCutoff,
                 FitMethod::MleFixedBeta}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

ModelParams FitResult::model() const {
  if (beta) return CutoffParams{alpha, *beta};
  return PowerLawParams{alpha};
}

int FitResult::free_parameters() const {
  switch (method) {
    case FitMethod::OlsLogLog:
    case FitMethod::Nls:
    case FitMethod::MleCutoff:
      return 2;
    default:
      return 1;
  }
}

namespace objective {

double ols_rss(const CurveData &curve, double alpha, double b) {
  CompensatedSum s;
  for (const auto &p : curve.points) {
    const double r =
        std::log(p.y) + alpha * std::log(static_cast<double>(p.x)) - b;
    s.add(r * r);
  }
  return s.value();
}

double constrained_ols_rss(const CurveData &curve, double alpha) {
  return ols_rss(curve, alpha, -log_zeta(alpha));
}

double nls_rss(const CurveData &curve, double alpha, double b) {
  CompensatedSum s;
  for (const auto &p : curve.points) {
    const double r =
        p.y - std::exp(b - alpha * std::log(static_cast<double>(p.x)));
    s.add(r * r);
  }
  return s.value();
}

double constrained_nls_rss(const CurveData &curve, double alpha) {
  return nls_rss(curve, alpha, -log_zeta(alpha));
}

double loglik_power_law(const SufficientStats &stats, double alpha) {
  return -alpha * stats.sum_log_z -
         static_cast<double>(stats.n) * log_zeta(alpha);
}

double loglik_cutoff(const SufficientStats &stats, double alpha, double beta) {
  return beta * static_cast<double>(stats.sum_z) - alpha * stats.sum_log_z -
         static_cast<double>(stats.n) *
             std::log(specfun::polylog(alpha, beta).value);
}

std::array<double, 2> cutoff_score(const SufficientStats &stats, double alpha,
                                   double beta) {
  const double n = static_cast<double>(stats.n);
  const double li = specfun::polylog(alpha, beta).value;
  const double li_ds = specfun::polylog_ds(alpha, beta).value;
  const double li_lower = specfun::polylog(alpha - 1.0, beta).value;
  return {-stats.sum_log_z / n - li_ds / li,
          static_cast<double>(stats.sum_z) / n - li_lower / li};
}

double power_law_score(const SufficientStats &stats, double alpha) {
  return -stats.sum_log_z / static_cast<double>(stats.n) -
         specfun::zeta_deriv(alpha).value / specfun::zeta(alpha).value;
}

}  // namespace objective

FitResult fit_ols_loglog(const CurveData &curve) {
  require_positive_y(curve, 2);
  CompensatedSum sx, sy;
  const double m = static_cast<double>(curve.points.size());
  for (const auto &p : curve.points) {
    sx.add(std::log(static_cast<double>(p.x)));
    sy.add(std::log(p.y));
  }
  const double mean_x = sx.value() / m;
  const double mean_y = sy.value() / m;
  CompensatedSum sxx, sxy;
  for (const auto &p : curve.points) {
    const double dx = std::log(static_cast<double>(p.x)) - mean_x;
    sxx.add(dx * dx);
    sxy.add(dx * (std::log(p.y) - mean_y));
  }
  if (!(sxx.value() > 0.0)) {
    throw DegenerateInputError("all curve points share the same x");
  }
  const double slope = sxy.value() / sxx.value();
  FitResult r;
  r.method = FitMethod::OlsLogLog;
  r.alpha = -slope;
  r.b = mean_y - slope * mean_x;
  r.objective = objective::ols_rss(curve, r.alpha, *r.b);
  r.converged = true;
  return r;
}

FitResult fit_constrained_ols(const CurveData &curve) {
  require_positive_y(curve, 1);
  const auto m = minimize_alpha(
      [&](double a) { return objective::constrained_ols_rss(curve, a); });
  FitResult r;
  r.method = FitMethod::ConstrainedOls;
  r.alpha = m.x;
  r.objective = m.f;
  r.converged = m.converged;
  r.iterations = m.iterations;
  return r;
}

FitResult fit_nls(const CurveData &curve) {
  require_positive_y(curve, 2);
  const auto start = fit_ols_loglog(curve);
  const auto f = [&](const optimize::Vec2 &p) {
    return objective::nls_rss(curve, p[0], p[1]);
  };
  const auto grad = [&](const optimize::Vec2 &p) {
    CompensatedSum ga, gb;
    for (const auto &pt : curve.points) {
      const double lx = std::log(static_cast<double>(pt.x));
      const double model = std::exp(p[1] - p[0] * lx);
      const double r = pt.y - model;
      ga.add(2.0 * r * model * lx);
      gb.add(-2.0 * r * model);
    }
    return optimize::Vec2{ga.value(), gb.value()};
  };
  optimize::NewtonOptions opts;
  opts.grad_tol = 1e-12;
  auto m = optimize::newton_minimize(f, grad, {start.alpha, *start.b}, opts);
  int iterations = m.iterations;
  if (!m.converged) {
    auto nm = optimize::nelder_mead(f, m.x, {0.05, 0.05});
    iterations += nm.iterations;
    m = optimize::newton_minimize(f, grad, nm.x, opts);
    iterations += m.iterations;
    if (!m.converged) throw ConvergenceError("NLS fit did not converge");
  }
  FitResult r;
  r.method = FitMethod::Nls;
  r.alpha = m.x[0];
  r.b = m.x[1];
  r.objective = m.f;
  r.converged = true;
  r.iterations = iterations;
  return r;
}

FitResult fit_constrained_nls(const CurveData &curve) {
  require_positive_y(curve, 1);
  const auto m = minimize_alpha(
      [&](double a) { return objective::constrained_nls_rss(curve, a); });
  FitResult r;
  r.method = FitMethod::ConstrainedNls;
  r.alpha = m.x;
  r.objective = m.f;
  r.converged = m.converged;
  r.iterations = m.iterations;
  return r;
}

FitResult fit_mle_power_law(const SufficientStats &stats) {
  require_stats(stats);
  if (!(stats.sum_log_z > 0.0)) {
    throw DegenerateInputError(
        "every observation equals 1: the likelihood increases without bound");
  }
  const auto m = optimize::brent_minimize(
      [&](double a) { return -objective::loglik_power_law(stats, a); },
      kAlphaLo, kAlphaHi, kXtol);
  if (!m.converged || m.x > kAlphaHi - 1e-6) {
    throw ConvergenceError("power-law MLE did not converge inside (1, 50]");
  }
  const double alpha = polish_root(
      [&](double a) { return objective::power_law_score(stats, a); }, m.x);
  FitResult r;
  r.method = FitMethod::MlePowerLaw;
  r.alpha = alpha;
  r.log_likelihood = objective::loglik_power_law(stats, alpha);
  r.objective = *r.log_likelihood;
  r.gradient_norm = std::fabs(objective::power_law_score(stats, alpha));
  r.converged = true;
  r.iterations = m.iterations;
  return r;
}

FitResult fit_mle_fixed_beta(const SufficientStats &stats, double beta) {
  require_stats(stats);
  if (!(beta < 0.0)) throw InvalidParamsError("fixed beta must be < 0");
  const auto score = [&](double a) {
    return objective::cutoff_score(stats, a, beta)[0];
  };
  // The score is decreasing in alpha; expand until it changes sign.
  double lo = 1.0;
  double hi = 3.0;
  for (int i = 0; score(lo) < 0.0; ++i) {
    if (i > 60) throw ConvergenceError("could not bracket fixed-beta MLE");
    lo -= (hi - lo);
  }
  for (int i = 0; score(hi) > 0.0; ++i) {
    if (i > 60) throw ConvergenceError("could not bracket fixed-beta MLE");
    hi += (hi - lo);
  }
  const auto m = optimize::brent_minimize(
      [&](double a) { return -objective::loglik_cutoff(stats, a, beta); }, lo,
      hi, kXtol);
  if (!m.converged) throw ConvergenceError("fixed-beta MLE did not converge");
  const double alpha = polish_root(score, m.x);
  FitResult r;
  r.method = FitMethod::MleFixedBeta;
  r.alpha = alpha;
  r.beta = beta;
  r.log_likelihood = objective::loglik_cutoff(stats, alpha, beta);
  r.objective = *r.log_likelihood;
  r.gradient_norm = std::fabs(score(alpha));
  r.converged = true;
  r.iterations = m.iterations;
  return r;
}

FitResult fit_mle_cutoff(const SufficientStats &stats) {
  require_stats(stats);
  const double n = static_cast<double>(stats.n);
  // ln(mean z) >= mean(ln z), with equality iff every z is the same.
  const double jensen_gap =
      std::log(static_cast<double>(stats.sum_z) / n) - stats.sum_log_z / n;
  if (!(stats.sum_log_z > 0.0) || !(jensen_gap > 1e-12)) {
    throw DegenerateInputError("need at least two distinct values");
  }
  const auto start_alpha = fit_mle_power_law(stats).alpha;
  const double start_beta = -n / static_cast<double>(stats.sum_z);

  // Optimise (alpha, t) with beta = -e^t; objective is -loglik / n.
  const auto f = [&](const optimize::Vec2 &p) {
    return -objective::loglik_cutoff(stats, p[0], -std::exp(p[1])) / n;
  };
  const auto grad = [&](const optimize::Vec2 &p) {
    const double beta = -std::exp(p[1]);
    const auto s = objective::cutoff_score(stats, p[0], beta);
    return optimize::Vec2{-s[0], -s[1] * beta};
  };
  // Convergence is judged on the score in (alpha, beta), not in t.
  const auto score_norm = [](const optimize::Vec2 &p,
                             const optimize::Vec2 &g) {
    return std::hypot(g[0], g[1] / std::exp(p[1]));
  };

  const optimize::Vec2 start{start_alpha, std::log(-start_beta)};
  const double boundary_t = std::log(kBoundaryBeta);
  optimize::NewtonOptions opts;
  opts.grad_tol = 1e-9;
  optimize::Minimum2d m;
  int iterations = 0;
  bool ok = false;
  try {
    m = optimize::newton_minimize(f, grad, start, opts, score_norm);
    iterations = m.iterations;
    ok = m.converged && m.x[1] > boundary_t;
  } catch (const DomainError &) {
    ok = false;
  }
  if (!ok) {
    // Fallback: simplex from the start, then Newton to tighten.
    const auto guarded = [&](const optimize::Vec2 &p) {
      if (p[1] < boundary_t - 5.0) return f({p[0], boundary_t - 5.0});
      return f(p);
    };
    const auto nm = optimize::nelder_mead(guarded, start, {0.1, 0.5});
    iterations += nm.iterations;
    if (nm.x[1] <= boundary_t) {
      throw BoundaryError(
          "cutoff likelihood is maximised at beta -> 0; use the power-law fit");
    }
    m = optimize::newton_minimize(f, grad, nm.x, opts, score_norm);
    iterations += m.iterations;
    if (!m.converged) throw ConvergenceError("cutoff MLE did not converge");
  }
  if (m.x[1] <= boundary_t) {
    throw BoundaryError(
        "cutoff likelihood is maximised at beta -> 0; use the power-law fit");
  }

  const double alpha = m.x[0];
  const double beta = -std::exp(m.x[1]);
  const auto s = objective::cutoff_score(stats, alpha, beta);
  FitResult r;
  r.method = FitMethod::MleCutoff;
  r.alpha = alpha;
  r.beta = beta;
  r.log_likelihood = objective::loglik_cutoff(stats, alpha, beta);
  r.objective = *r.log_likelihood;
  r.gradient_norm = std::hypot(s[0], s[1]);
  r.converged = *r.gradient_norm <= 1e-7;
  r.iterations = iterations;
  if (!r.converged) throw ConvergenceError("cutoff MLE score above tolerance");
  return r;
}

FitResult fit(FitMethod method, const FrequencyTable &table,
              const CurveData &curve, double beta) {
  switch (method) {
    case FitMethod::OlsLogLog: return fit_ols_loglog(curve);
    case FitMethod::ConstrainedOls: return fit_constrained_ols(curve);
    case FitMethod::Nls: return fit_nls(curve);
    case FitMethod::ConstrainedNls: return fit_constrained_nls(curve);
    case FitMethod::MlePowerLaw: return fit_mle_power_law(sufficient_stats(table));
    case FitMethod::MleCutoff: return fit_mle_cutoff(sufficient_stats(table));
    case FitMethod::MleFixedBeta:
      return fit_mle_fixed_beta(sufficient_stats(table), beta);
  }
  throw InvalidParamsError("unknown fit method");
}

}  // namespace powerfit
