#include "powerfit/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "powerfit/errors.hpp"

namespace powerfit::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Euler-Maclaurin: direct sum to N-1, integral + half-term + corrections
// through B8. The B10 correction is the first omitted term.
constexpr int kEmTerms = 20;
constexpr std::array<double, 4> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,                 // B2 / 2!
    -1.0 / 30.0 / 24.0,              // B4 / 4!
    1.0 / 42.0 / 720.0,              // B6 / 6!
    -1.0 / 30.0 / 40320.0,           // B8 / 8!
};
constexpr double kB10OverFactorial = 5.0 / 66.0 / 3628800.0;

// Half-width of the window around positive integer s where the expansion
// about beta = 0 is replaced by interpolation, and the node spacing used.
constexpr double kIntegerWindow = 2e-3;
constexpr int kInterpNodesPerSide = 4;

// Above this order the direct series converges through n^-s alone.
constexpr double kSeriesOrderMin = 12.0;

// sin(pi*x) with argument reduction so that zeros at integers are exact.
double sin_pi(double x) {
  double r = std::remainder(x, 2.0);  // r in [-1, 1]
  if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

// zeta by Euler-Maclaurin, valid for real s > -7, s != 1. Returns value and
// an absolute error bound.
EvalResult zeta_em(double s) {
  const double big_n = kEmTerms;
  double sum = 0.0;
  double abs_sum = 0.0;
  for (int n = kEmTerms - 1; n >= 1; --n) {
    const double t = std::pow(static_cast<double>(n), -s);
    sum += t;
    abs_sum += std::fabs(t);
  }
  const double n_pow = std::pow(big_n, -s);
  const double integral = big_n * n_pow / (s - 1.0);
  sum += integral + 0.5 * n_pow;
  abs_sum += std::fabs(integral) + 0.5 * n_pow;

  // rising factorial (s)_{2j-1} times N^{-s-2j+1}
  double rising = s;
  double n_factor = n_pow / big_n;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double t = kBernoulliOverFactorial[j] * rising * n_factor;
    sum += t;
    abs_sum += std::fabs(t);
    const double k = 2.0 * static_cast<double>(j) + 1.0;
    rising *= (s + k) * (s + k + 1.0);
    n_factor /= big_n * big_n;
  }
  const double omitted = std::fabs(kB10OverFactorial * rising * n_factor);
  return {sum, omitted + 8.0 * kEps * abs_sum};
}

// d/ds of the Euler-Maclaurin formula above, s > 0, s != 1.
EvalResult zeta_em_deriv(double s) {
  const double big_n = kEmTerms;
  const double log_n = std::log(big_n);
  double sum = 0.0;
  double abs_sum = 0.0;
  for (int n = kEmTerms - 1; n >= 2; --n) {
    const double ln = std::log(static_cast<double>(n));
    const double t = -ln * std::pow(static_cast<double>(n), -s);
    sum += t;
    abs_sum += std::fabs(t);
  }
  const double n_pow = std::pow(big_n, -s);
  const double integral = big_n * n_pow / (s - 1.0);
  const double d_integral = -log_n * integral - integral / (s - 1.0);
  const double d_half = -0.5 * log_n * n_pow;
  sum += d_integral + d_half;
  abs_sum += std::fabs(d_integral) + std::fabs(d_half);

  // d/ds [(s)_m N^{-s-m}] = (s)_m N^{-s-m} (sum_{i<m} 1/(s+i) - ln N)
  double rising = s;
  double harmonic = 1.0 / s;
  double n_factor = n_pow / big_n;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double t =
        kBernoulliOverFactorial[j] * rising * n_factor * (harmonic - log_n);
    sum += t;
    abs_sum += std::fabs(t);
    const double k = 2.0 * static_cast<double>(j) + 1.0;
    rising *= (s + k) * (s + k + 1.0);
    harmonic += 1.0 / (s + k) + 1.0 / (s + k + 1.0);
    n_factor /= big_n * big_n;
  }
  const double omitted = std::fabs(kB10OverFactorial * rising * n_factor) *
                         (std::fabs(harmonic) + log_n);
  return {sum, omitted + 8.0 * kEps * abs_sum};
}

// Functional-equation prefactor for x < 0:
//   zeta(x) = A(x) sin(pi x / 2),  A(x) = 2^x pi^(x-1) Gamma(1-x) zeta(1-x).
double functional_prefactor(double x) {
  const double log_a = x * std::log(2.0) + (x - 1.0) * std::log(kPi) +
                       std::lgamma(1.0 - x) + std::log(zeta_em(1.0 - x).value);
  return std::exp(log_a);
}

// Upper bound on |zeta(x)| for x < 0 (the functional equation without the
// sine factor).
double zeta_negative_bound(double x) { return functional_prefactor(x); }

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": result not representable");
  }
}

void check_polylog_domain(double s, double beta, const char *what) {
  if (std::isnan(s) || std::isnan(beta)) {
    throw DomainError(std::string(what) + ": NaN argument");
  }
  if (beta > 0.0) {
    throw DomainError(std::string(what) + ": requires beta <= 0, got " +
                      std::to_string(beta));
  }
  if (beta == 0.0 && !(s > 1.0)) {
    throw DomainError(std::string(what) + ": beta = 0 requires s > 1, got s = " +
                      std::to_string(s));
  }
}

void check_zeta_domain(double s, const char *what) {
  if (!(s > 1.0 + 1e-12)) {
    throw DomainError(std::string(what) + ": requires s > 1, got " +
                      std::to_string(s));
  }
}

// Tail bound for sum_{m>n} e^{beta m} m^{-s} (log_power = 0) or
// sum_{m>n} ln(m) e^{beta m} m^{-s} (log_power = 1), given the n-th term.
double series_tail_bound(double s, double beta, double n, double term,
                         int log_power) {
  double best = std::numeric_limits<double>::infinity();
  // Ratio of successive terms is at most q for all m >= n.
  double q = std::exp(beta) * (s < 0.0 ? std::pow(1.0 + 1.0 / n, -s) : 1.0);
  if (log_power == 1) q *= std::log(n + 1.0) / std::log(n);
  if (q < 1.0) best = std::fabs(term) * q / (1.0 - q);
  // Integral bound, valid once the summand is decreasing (s > 1 and, with the
  // log factor, n > e^{1/s}).
  if (s > 1.0 && (log_power == 0 || n > std::exp(1.0 / s))) {
    const double base = std::exp(beta * n) * std::pow(n, 1.0 - s) / (s - 1.0);
    const double bound =
        log_power == 0 ? base : base * (std::log(n) + 1.0 / (s - 1.0));
    best = std::fmin(best, bound);
  }
  return best;
}

EvalResult series_impl(double s, double beta, int log_power) {
  double sum = 0.0;
  double comp = 0.0;  // Neumaier compensation
  double abs_sum = 0.0;
  constexpr long kMaxTerms = 200'000'000;
  for (long n = 1; n <= kMaxTerms; ++n) {
    const double x = static_cast<double>(n);
    double term = std::exp(beta * x - s * std::log(x));
    if (log_power == 1) term *= -std::log(x);
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    abs_sum += std::fabs(term);
    if (n >= 3) {
      const double tail = series_tail_bound(s, beta, x, term, log_power);
      const double total = std::fabs(sum + comp);
      if (tail <= 1e-16 * total || (total == 0.0 && tail == 0.0)) {
        return {sum + comp, tail + 4.0 * kEps * abs_sum};
      }
    }
  }
  throw ResourceError("polylog series did not converge within term cap");
}

// Expansion of Li_s(e^mu) about mu = 0 (|mu| < 2 pi, s not a positive
// integer). With derivative = true returns d/ds instead.
EvalResult expansion_impl(double s, double mu, bool derivative) {
  const double neg_mu = -mu;
  const double gamma = std::tgamma(1.0 - s);
  const double pow_term = std::pow(neg_mu, s - 1.0);
  double head = gamma * pow_term;
  if (derivative) head *= std::log(neg_mu) - digamma(1.0 - s);

  double sum = head;
  double abs_sum = std::fabs(head);
  double mu_pow = 1.0;  // mu^k / k!
  double tail = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double x = s - k;
    double z;
    if (derivative) {
      z = detail::zeta_deriv_any(x);
    } else {
      z = detail::zeta_any(x);
    }
    const double term = z * mu_pow;
    sum += term;
    abs_sum += std::fabs(term);
    // Stop once the magnitude envelope of the remaining terms is negligible.
    // For x < 0 the envelope ratio is about |mu| (k + 1 - s) / (2 pi (k + 1)).
    if (x < -1.0) {
      double envelope = zeta_negative_bound(x - 1.0) * std::fabs(mu_pow * mu) /
                        (k + 1.0);
      if (derivative) {
        envelope *= std::log(2.0 * kPi) + std::fabs(digamma(2.0 - x)) +
                    0.5 * kPi + 1.0;
      }
      const double ratio = std::fabs(mu) / (2.0 * kPi) * 1.5;
      const double rest = envelope / (1.0 - ratio);
      if (rest <= 1e-17 * std::fabs(sum)) {
        tail = rest;
        return {sum, tail + 16.0 * kEps * abs_sum};
      }
    }
    mu_pow *= mu / (k + 1.0);
  }
  throw ConvergenceError("polylog expansion did not converge");
}

// Lagrange interpolation through nodes m + j*h, j = +-1..+-kInterpNodesPerSide.
template <typename F>
EvalResult interpolate_across_integer(double s, double m, F &&eval) {
  constexpr int kNodes = 2 * kInterpNodesPerSide;
  std::array<double, kNodes> xs{};
  std::array<EvalResult, kNodes> ys{};
  int idx = 0;
  for (int j = -kInterpNodesPerSide; j <= kInterpNodesPerSide; ++j) {
    if (j == 0) continue;
    xs[idx] = m + j * kIntegerWindow;
    ys[idx] = eval(xs[idx]);
    ++idx;
  }
  double value = 0.0;
  double err = 0.0;
  double max_node = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    double w = 1.0;
    for (int j = 0; j < kNodes; ++j) {
      if (j != i) w *= (s - xs[j]) / (xs[i] - xs[j]);
    }
    value += w * ys[i].value;
    err += std::fabs(w) * ys[i].abs_error_bound;
    max_node = std::fmax(max_node, std::fabs(ys[i].value));
  }
  // Widened: node errors propagated through the weights plus an allowance
  // for the degree-7 interpolation remainder.
  return {value, 2.0 * err + 1e-12 * max_node};
}

bool near_positive_integer(double s, double &m) {
  m = std::round(s);
  return m >= 1.0 && std::fabs(s - m) < kIntegerWindow;
}

}  // namespace

double digamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw DomainError("digamma: pole at non-positive integer");
  }
  if (x < 0.0) {
    // psi(x) = psi(1 - x) - pi cot(pi x)
    return digamma(1.0 - x) - kPi * cos_pi(x) / sin_pi(x);
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series with B2..B12.
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 * inv - series;
}

namespace detail {

double zeta_any(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  if (s == 0.0) return -0.5;
  if (s > 0.0) return zeta_em(s).value;
  return functional_prefactor(s) * sin_pi(0.5 * s);
}

double zeta_deriv_any(double s) {
  if (s == 1.0) throw DomainError("zeta': pole at s = 1");
  if (s == 0.0) return -0.5 * std::log(2.0 * kPi);
  if (s > 0.0) return zeta_em_deriv(s).value;
  // zeta = A S with S = sin(pi s/2); A'/A = ln 2 + ln pi - psi(1-s) - zeta'(1-s)/zeta(1-s)
  const double a = functional_prefactor(s);
  const double z1 = zeta_em(1.0 - s).value;
  const double dz1 = zeta_em_deriv(1.0 - s).value;
  const double log_deriv =
      std::log(2.0) + std::log(kPi) - digamma(1.0 - s) - dz1 / z1;
  return a * (log_deriv * sin_pi(0.5 * s) + 0.5 * kPi * cos_pi(0.5 * s));
}

EvalResult polylog_series(double s, double beta) {
  return series_impl(s, beta, 0);
}

EvalResult polylog_ds_series(double s, double beta) {
  return series_impl(s, beta, 1);
}

EvalResult polylog_expansion(double s, double beta) {
  double m;
  if (near_positive_integer(s, m)) {
    return interpolate_across_integer(
        s, m, [beta](double x) { return expansion_impl(x, beta, false); });
  }
  return expansion_impl(s, beta, false);
}

EvalResult polylog_ds_expansion(double s, double beta) {
  double m;
  if (near_positive_integer(s, m)) {
    return interpolate_across_integer(
        s, m, [beta](double x) { return expansion_impl(x, beta, true); });
  }
  return expansion_impl(s, beta, true);
}

}  // namespace detail

EvalResult zeta(double s) {
  check_zeta_domain(s, "zeta");
  return zeta_em(s);
}

EvalResult zeta_deriv(double s) {
  check_zeta_domain(s, "zeta_deriv");
  return zeta_em_deriv(s);
}

EvalResult polylog(double s, double beta) {
  check_polylog_domain(s, beta, "polylog");
  EvalResult r;
  if (beta == 0.0) {
    r = zeta_em(s);
  } else if (beta <= detail::kSeriesBetaMax || s >= kSeriesOrderMin) {
    r = detail::polylog_series(s, beta);
  } else {
    r = detail::polylog_expansion(s, beta);
  }
  require_finite(r.value, "polylog");
  return r;
}

EvalResult polylog_ds(double s, double beta) {
  check_polylog_domain(s, beta, "polylog_ds");
  EvalResult r;
  if (beta == 0.0) {
    r = zeta_em_deriv(s);
  } else if (beta <= detail::kSeriesBetaMax || s >= kSeriesOrderMin) {
    r = detail::polylog_ds_series(s, beta);
  } else {
    r = detail::polylog_ds_expansion(s, beta);
  }
  require_finite(r.value, "polylog_ds");
  return r;
}

double chi2_sf_1dof(double t) {
  if (std::isnan(t) || t < 0.0) {
    throw DomainError("chi2_sf_1dof: requires t >= 0");
  }
  return std::erfc(std::sqrt(0.5 * t));
}

double chi2_quantile_1dof(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("chi2_quantile_1dof: level must lie in (0, 1)");
  }
  const double target = 1.0 - level;
  double lo = 0.0;
  double hi = 1.0;
  while (chi2_sf_1dof(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_sf_1dof(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace powerfit::specfun
