#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include "powerfit/data.hpp"
#include "powerfit/distributions.hpp"
#include "powerfit/errors.hpp"
#include "powerfit/estimators.hpp"
#include "powerfit/specfun.hpp"

using namespace powerfit;
namespace obj = powerfit::objective;

namespace {

const FrequencyTable &lotka() {
  static const FrequencyTable table = [] {
    std::ifstream in(POWERFIT_LOTKA_CSV);
    return load_frequency_table(in);
  }();
  return table;
}

// y = c x^-alpha on x = 1..points.
CurveData exact_curve(double alpha, double c, int points = 200) {
  CurveData curve;
  for (int x = 1; x <= points; ++x) curve.points.push_back({x, c * std::pow(x, -alpha)});
  return curve;
}

// Statistics of a huge sample whose log-moment matches the power law exactly.
SufficientStats exact_power_law_stats(double alpha) {
  const double n = 1e12;
  const double mean_log =
      -specfun::zeta_deriv(alpha).value / specfun::zeta(alpha).value;
  return {static_cast<std::int64_t>(n), static_cast<std::int64_t>(10 * n),
          n * mean_log};
}

double min_on_grid(double lo, double hi, double step,
                   const std::function<double(double)> &f) {
  double best = std::numeric_limits<double>::infinity();
  const int count = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= count; ++i) best = std::min(best, f(lo + i * step));
  return best;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {FitMethod::OlsLogLog, FitMethod::ConstrainedOls, FitMethod::Nls,
                 FitMethod::ConstrainedNls, FitMethod::MlePowerLaw,
                 FitMethod::MleCutoff, FitMethod::MleFixedBeta}) {
    CHECK(parse_fit_method(to_string(m)) == m);
  }
  CHECK_FALSE(parse_fit_method("r2").has_value());
}

TEST_CASE("fields present per method") {
  const auto curve = to_curve(lotka());
  const auto stats = sufficient_stats(lotka());
  const auto ols = fit_ols_loglog(curve);
  CHECK(ols.b.has_value());
  CHECK_FALSE(ols.beta.has_value());
  CHECK_FALSE(ols.log_likelihood.has_value());
  CHECK_FALSE(fit_constrained_ols(curve).b.has_value());
  CHECK(fit_nls(curve).b.has_value());
  const auto cut = fit_mle_cutoff(stats);
  CHECK(cut.beta.has_value());
  CHECK(cut.log_likelihood.has_value());
  CHECK_FALSE(cut.b.has_value());
  CHECK(cut.free_parameters() == 2);
  const auto pl = fit_mle_power_law(stats);
  CHECK_FALSE(pl.beta.has_value());
  CHECK(pl.free_parameters() == 1);
  CHECK(fit_mle_fixed_beta(stats, -1e-6).free_parameters() == 1);
}

TEST_CASE("exact synthetic curves") {
  const auto ols = fit_ols_loglog(exact_curve(2.0, 0.3));
  CHECK(ols.alpha == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*ols.b == doctest::Approx(std::log(0.3)).epsilon(1e-12));
  CHECK(ols.objective < 1e-20);

  const auto c_ols = fit_constrained_ols(exact_curve(2.2, 1 / specfun::zeta(2.2).value));
  CHECK(std::fabs(c_ols.alpha - 2.2) < 1e-8);

  const auto nls = fit_nls(exact_curve(2.0, 0.5));
  CHECK(std::fabs(nls.alpha - 2.0) < 1e-8);
  CHECK(std::fabs(*nls.b - std::log(0.5)) < 1e-8);

  const auto c_nls = fit_constrained_nls(exact_curve(1.7, 1 / specfun::zeta(1.7).value));
  CHECK(std::fabs(c_nls.alpha - 1.7) < 1e-8);
}

TEST_CASE("all five estimators agree on an exact power law") {
  for (double alpha : {1.6, 2.0, 2.7}) {
    CAPTURE(alpha);
    const auto curve = exact_curve(alpha, 1 / specfun::zeta(alpha).value);
    const double fits[] = {fit_ols_loglog(curve).alpha, fit_constrained_ols(curve).alpha,
                           fit_nls(curve).alpha, fit_constrained_nls(curve).alpha,
                           fit_mle_power_law(exact_power_law_stats(alpha)).alpha};
    for (double a : fits) CHECK(std::fabs(a - alpha) < 1e-6);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_ols_loglog(CurveData{{{3, 0.5}, {3, 0.2}}}), DegenerateInputError);
  CHECK_THROWS_AS(fit_ols_loglog(CurveData{{{1, 0.5}}}), DegenerateInputError);
  CHECK_THROWS_AS(fit_ols_loglog(CurveData{{{1, 0.5}, {2, 0.0}}}), InvalidParamsError);
  CHECK_THROWS_AS(fit_constrained_ols(CurveData{{{1, 0.5}, {2, -0.1}}}), InvalidParamsError);
  CHECK_THROWS_AS(fit_mle_power_law(sufficient_stats(FrequencyTable({{1, 50}}))),
                  DegenerateInputError);
  CHECK_THROWS_AS(fit_mle_cutoff(sufficient_stats(FrequencyTable({{4, 50}}))),
                  DegenerateInputError);
  CHECK_THROWS_AS(fit_mle_fixed_beta(sufficient_stats(lotka()), 0.0), InvalidParamsError);
}

TEST_CASE("least-squares fits beat their grid oracles") {
  const auto curve = to_curve(lotka());
  const auto c_ols = fit_constrained_ols(curve);
  CHECK(c_ols.objective <= min_on_grid(1.01, 4.0, 0.001, [&](double a) {
    return obj::constrained_ols_rss(curve, a);
  }));
  const auto c_nls = fit_constrained_nls(curve);
  CHECK(c_nls.objective <= min_on_grid(1.01, 4.0, 0.001, [&](double a) {
    return obj::constrained_nls_rss(curve, a);
  }));
  const auto nls = fit_nls(curve);
  double grid = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      grid = std::min(grid, obj::nls_rss(curve, 1.5 + 0.005 * i, -1.0 + 0.005 * j));
    }
  }
  CHECK(nls.objective <= grid);
  const auto ols = fit_ols_loglog(curve);
  for (double da : {-1e-4, 1e-4}) {
    for (double db : {-1e-4, 1e-4}) {
      CHECK(ols.objective <= obj::ols_rss(curve, ols.alpha + da, *ols.b + db));
    }
  }
}

TEST_CASE("likelihood fits beat their grid oracles") {
  const auto stats = sufficient_stats(lotka());
  const auto cut = fit_mle_cutoff(stats);
  double grid = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 350; ++i) {
    for (int j = 0; j <= 245; ++j) {
      grid = std::max(grid, obj::loglik_cutoff(stats, 1.5 + 0.002 * i, -0.05 + 0.0002 * j));
    }
  }
  CHECK(*cut.log_likelihood >= grid);

  const auto fixed = fit_mle_fixed_beta(stats, -1e-6);
  CHECK(*fixed.log_likelihood >= -min_on_grid(1.5, 2.5, 1e-4, [&](double a) {
    return -obj::loglik_cutoff(stats, a, -1e-6);
  }));
  const auto pl = fit_mle_power_law(stats);
  CHECK(*pl.log_likelihood >= -min_on_grid(1.01, 4.0, 1e-4, [&](double a) {
    return -obj::loglik_power_law(stats, a);
  }));
}

TEST_CASE("stationarity at the optima") {
  const auto stats = sufficient_stats(lotka());
  const double n = static_cast<double>(stats.n);

  const auto pl = fit_mle_power_law(stats);
  const double zeta_ratio = specfun::zeta_deriv(pl.alpha).value / specfun::zeta(pl.alpha).value;
  CHECK(std::fabs(stats.sum_log_z / n + zeta_ratio) <= 1e-8);

  const auto cut = fit_mle_cutoff(stats);
  CHECK(cut.converged);
  CHECK(*cut.gradient_norm <= 1e-7);
  const double mean = model_mean(CutoffParams{cut.alpha, *cut.beta});
  CHECK(std::fabs(mean - static_cast<double>(stats.sum_z) / n) <= 1e-6 * mean);

  // Central differences of the log-likelihood against the analytic score.
  const double h = 1e-6;
  const auto score = obj::cutoff_score(stats, cut.alpha, *cut.beta);
  const double fd_a = (obj::loglik_cutoff(stats, cut.alpha + h, *cut.beta) -
                       obj::loglik_cutoff(stats, cut.alpha - h, *cut.beta)) / (2 * h);
  const double fd_b = (obj::loglik_cutoff(stats, cut.alpha, *cut.beta + h) -
                       obj::loglik_cutoff(stats, cut.alpha, *cut.beta - h)) / (2 * h);
  CHECK(std::fabs(fd_a - n * score[0]) < 1e-5 * n);
  CHECK(std::fabs(fd_b - n * score[1]) < 1e-5 * n);
  CHECK(std::fabs(fd_a) < 1e-2);
  CHECK(std::fabs(fd_b) < 1e-1);

  const double fd_pl = (obj::loglik_power_law(stats, pl.alpha + h) -
                        obj::loglik_power_law(stats, pl.alpha - h)) / (2 * h);
  CHECK(std::fabs(fd_pl - n * obj::power_law_score(stats, pl.alpha)) < 1e-5 * n);
}

TEST_CASE("profile consistency and nesting") {
  const auto stats = sufficient_stats(lotka());
  const auto cut = fit_mle_cutoff(stats);
  const auto profile = fit_mle_fixed_beta(stats, *cut.beta);
  CHECK(std::fabs(profile.alpha - cut.alpha) < 1e-6);
  const auto pl = fit_mle_power_law(stats);
  double prev = *cut.log_likelihood;
  for (double beta : {-0.0172869, -0.01, -1e-3, -1e-4, -1e-6, -1e-9}) {
    const auto f = fit_mle_fixed_beta(stats, beta);
    CHECK(*cut.log_likelihood >= *f.log_likelihood);
    if (beta > -0.017) CHECK(*f.log_likelihood <= prev + 1e-9);
    prev = *f.log_likelihood;
    CHECK(*f.log_likelihood >= *pl.log_likelihood - 1e-9);
  }
}

TEST_CASE("recovery from seeded samples") {
  const auto pl = fit_mle_power_law(sufficient_stats(sample(PowerLawParams{2.5}, 100000, 17)));
  CHECK(std::fabs(pl.alpha - 2.5) < 0.02);

  const auto cut = fit_mle_cutoff(
      sufficient_stats(sample(CutoffParams{1.8, -0.02}, 100000, 99)));
  CHECK(std::fabs(cut.alpha - 1.8) < 0.05);
  CHECK(std::fabs(*cut.beta + 0.02) < 0.005);
}

TEST_CASE("cutoff fit at the boundary") {
  // Light head with one extreme value: the likelihood prefers beta -> 0.
  const FrequencyTable table({{1, 900}, {2, 80}, {3, 19}, {100000, 1}});
  CHECK_THROWS_AS(fit_mle_cutoff(sufficient_stats(table)), BoundaryError);
}

TEST_CASE("dispatcher") {
  const auto curve = to_curve(lotka());
  const auto pl = fit(FitMethod::MlePowerLaw, lotka(), curve);
  CHECK(pl.method == FitMethod::MlePowerLaw);
  const auto fixed = fit(FitMethod::MleFixedBeta, lotka(), curve, -0.01);
  CHECK(*fixed.beta == -0.01);
  CHECK(fit(FitMethod::Nls, lotka(), curve).alpha == fit_nls(curve).alpha);
}
