#ifndef POWERFIT_SPECFUN_HPP
#define POWERFIT_SPECFUN_HPP

namespace powerfit::specfun {

/// A computed value together with a bound on its absolute error.
struct EvalResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

/// Riemann zeta for real s > 1, by Euler-Maclaurin summation.
EvalResult zeta(double s);

/// d/ds zeta(s) for s > 1.
EvalResult zeta_deriv(double s);

/// Li_s(e^beta) on the real slice beta <= 0. Requires beta < 0, or beta == 0
/// with s > 1 (where it equals zeta(s)).
///
/// Evaluation strategy:
///   beta <= -0.05          direct series with a geometric tail bound
///   -0.05 < beta < 0       expansion about beta = 0:
///                          Gamma(1-s)(-beta)^(s-1) + sum_k zeta(s-k) beta^k/k!
///   beta == 0              zeta(s)
/// The expansion has removable singularities at positive integer s; within
/// 1e-4 of one it is replaced by cubic interpolation through four nearby
/// nodes and the error bound is widened accordingly.
EvalResult polylog(double s, double beta);

/// d/ds Li_s(e^beta), same domain and strategy split as polylog.
EvalResult polylog_ds(double s, double beta);

/// P(chi^2_1 > t) = erfc(sqrt(t/2)).
double chi2_sf_1dof(double t);

/// Smallest t with chi2_sf_1dof(t) <= 1 - level, i.e. the `level` quantile.
double chi2_quantile_1dof(double level);

/// Digamma function psi(x) for real x not a non-positive integer.
double digamma(double x);

namespace detail {

// Threshold between the direct series and the expansion about beta = 0.
inline constexpr double kSeriesBetaMax = -0.05;

// Exposed so the strategy-overlap property can be tested directly.
EvalResult polylog_series(double s, double beta);
EvalResult polylog_expansion(double s, double beta);
EvalResult polylog_ds_series(double s, double beta);
EvalResult polylog_ds_expansion(double s, double beta);

// zeta and zeta' continued to all real s != 1.
double zeta_any(double s);
double zeta_deriv_any(double s);

}  // namespace detail

}  // namespace powerfit::specfun

#endif  // POWERFIT_SPECFUN_HPP
