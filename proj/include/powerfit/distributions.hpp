#ifndef POWERFIT_DISTRIBUTIONS_HPP
#define POWERFIT_DISTRIBUTIONS_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "powerfit/data.hpp"

namespace powerfit {

/// p(x) = x^-alpha / zeta(alpha), alpha > 1.
struct PowerLawParams {
  double alpha = 2.0;
};

/// p(x) = e^{beta x} x^-alpha / Li_alpha(e^beta), with beta < 0, or beta = 0
/// and alpha > 1.
struct CutoffParams {
  double alpha = 2.0;
  double beta = 0.0;
};

using ModelParams = std::variant<PowerLawParams, CutoffParams>;

/// Throws InvalidParamsError when the parameters do not define a
/// normalisable distribution.
void validate(const ModelParams &params);

/// A validated model with its normaliser evaluated once.
class DiscreteModel {
 public:
  explicit DiscreteModel(const ModelParams &params);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// ln Li_alpha(e^beta) (ln zeta(alpha) for the power law).
  double log_normalizer() const { return log_norm_; }

  double log_pmf(std::int64_t x) const;
  double pmf(std::int64_t x) const;
  /// F(x) by compensated summation of pmf(1..x).
  double cdf(std::int64_t x) const;
  /// F(1), ..., F(x_max).
  std::vector<double> cdf_table(std::int64_t x_max) const;
  /// Upper bound on 1 - F(x).
  double tail_bound(std::int64_t x) const;

 private:
  double alpha_;
  double beta_;
  double log_norm_;
};

double pmf(const ModelParams &params, std::int64_t x);
double log_pmf(const ModelParams &params, std::int64_t x);
double cdf(const ModelParams &params, std::int64_t x);

/// E[X] = Li_{alpha-1}(e^beta) / Li_alpha(e^beta). Requires beta < 0.
double model_mean(const CutoffParams &params);

/// Inverse-CDF sampler. The cumulative table is extended until it reaches
/// 1 - 1e-12; the residual mass goes to the last cell. Draws use
/// std::mt19937_64 seeded with `seed`, 53-bit uniforms (top bits).
class Sampler {
 public:
  /// Throws ResourceError if the 1 - 1e-12 quantile exceeds kMaxSupport.
  explicit Sampler(const ModelParams &params);

  static constexpr std::int64_t kMaxSupport = 100'000'000;

  FrequencyTable draw(std::int64_t count, std::uint64_t seed) const;
  std::int64_t support_end() const { return last_; }

 private:
  std::int64_t invert(double u) const;

  DiscreteModel model_;
  std::int64_t last_ = 1;
  // Dense cumulative values for x = 1..dense_.size().
  std::vector<double> dense_;
  // Cumulative value at the end of each block of kBlock values past the
  // dense range.
  std::vector<double> block_end_;
  static constexpr std::int64_t kDense = 1 << 16;
  static constexpr std::int64_t kBlock = 1024;
};

FrequencyTable sample(const ModelParams &params, std::int64_t count,
                      std::uint64_t seed);

}  // namespace powerfit

#endif  // POWERFIT_DISTRIBUTIONS_HPP
