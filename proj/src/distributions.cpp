#include "powerfit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "powerfit/errors.hpp"
#include "powerfit/specfun.hpp"

namespace powerfit {

namespace {

constexpr double kQuantileGap = 1e-12;

struct AlphaBeta {
  double alpha;
  double beta;
};

AlphaBeta unpack(const ModelParams &params) {
  if (const auto *p = std::get_if<PowerLawParams>(&params)) {
    return {p->alpha, 0.0};
  }
  const auto &c = std::get<CutoffParams>(params);
  return {c.alpha, c.beta};
}

void require_support(std::int64_t x) {
  if (x < 1) {
    throw InvalidParamsError("support is x >= 1, got " + std::to_string(x));
  }
}

// Uniform in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const ModelParams &params) {
  const auto [alpha, beta] = unpack(params);
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidParamsError("parameters must be finite");
  }
  if (std::holds_alternative<PowerLawParams>(params)) {
    if (!(alpha > 1.0)) {
      throw InvalidParamsError("power law requires alpha > 1, got " +
                               std::to_string(alpha));
    }
    return;
  }
  if (beta > 0.0 || (beta == 0.0 && !(alpha > 1.0))) {
    throw InvalidParamsError(
        "cutoff model requires beta < 0, or beta = 0 and alpha > 1");
  }
}

DiscreteModel::DiscreteModel(const ModelParams &params) {
  validate(params);
  const auto ab = unpack(params);
  alpha_ = ab.alpha;
  beta_ = ab.beta;
  log_norm_ = std::log(specfun::polylog(alpha_, beta_).value);
}

double DiscreteModel::log_pmf(std::int64_t x) const {
  require_support(x);
  const double xd = static_cast<double>(x);
  return beta_ * xd - alpha_ * std::log(xd) - log_norm_;
}

double DiscreteModel::pmf(std::int64_t x) const { return std::exp(log_pmf(x)); }

double DiscreteModel::cdf(std::int64_t x) const {
  require_support(x);
  CompensatedSum sum;
  for (std::int64_t k = 1; k <= x; ++k) sum.add(pmf(k));
  return sum.value();
}

std::vector<double> DiscreteModel::cdf_table(std::int64_t x_max) const {
  require_support(x_max);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x_max));
  CompensatedSum sum;
  for (std::int64_t k = 1; k <= x_max; ++k) {
    sum.add(pmf(k));
    out.push_back(sum.value());
  }
  return out;
}

double DiscreteModel::tail_bound(std::int64_t x) const {
  require_support(x);
  const double xd = static_cast<double>(x);
  double best = std::numeric_limits<double>::infinity();
  if (beta_ < 0.0) {
    const double q =
        std::exp(beta_) * (alpha_ < 0.0 ? std::pow(1.0 + 1.0 / xd, -alpha_) : 1.0);
    if (q < 1.0) best = pmf(x) * q / (1.0 - q);
  }
  if (alpha_ > 1.0) {
    const double integral = std::exp(beta_ * xd - log_norm_) *
                            std::pow(xd, 1.0 - alpha_) / (alpha_ - 1.0);
    best = std::fmin(best, integral);
  }
  return best;
}

double pmf(const ModelParams &params, std::int64_t x) {
  return DiscreteModel(params).pmf(x);
}

double log_pmf(const ModelParams &params, std::int64_t x) {
  return DiscreteModel(params).log_pmf(x);
}

double cdf(const ModelParams &params, std::int64_t x) {
  return DiscreteModel(params).cdf(x);
}

double model_mean(const CutoffParams &params) {
  validate(params);
  if (!(params.beta < 0.0)) {
    throw DomainError("model_mean requires beta < 0");
  }
  return specfun::polylog(params.alpha - 1.0, params.beta).value /
         specfun::polylog(params.alpha, params.beta).value;
}

Sampler::Sampler(const ModelParams &params) : model_(params) {
  // Upper estimate of the 1 - gap quantile from the tail bound.
  std::int64_t hi = 1;
  while (model_.tail_bound(hi) > kQuantileGap) {
    if (hi > kMaxSupport) {
      throw ResourceError("1 - 1e-12 quantile exceeds the support cap of " +
                          std::to_string(kMaxSupport));
    }
    hi *= 2;
  }
  std::int64_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (model_.tail_bound(mid) > kQuantileGap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi > kMaxSupport) {
    throw ResourceError("1 - 1e-12 quantile exceeds the support cap of " +
                        std::to_string(kMaxSupport));
  }

  CompensatedSum sum;
  std::int64_t k = 1;
  for (;; ++k) {
    sum.add(model_.pmf(k));
    const double c = sum.value();
    if (k <= kDense) {
      dense_.push_back(c);
    } else if ((k - kDense) % kBlock == 0) {
      block_end_.push_back(c);
    }
    if (c >= 1.0 - kQuantileGap || k >= hi) break;
  }
  last_ = k;
}

std::int64_t Sampler::invert(double u) const {
  // Smallest x with F(x) > u, searched in the dense table first.
  auto it = std::upper_bound(dense_.begin(), dense_.end(), u);
  if (it != dense_.end()) {
    return static_cast<std::int64_t>(it - dense_.begin()) + 1;
  }
  if (last_ <= kDense) return last_;

  auto bit = std::upper_bound(block_end_.begin(), block_end_.end(), u);
  const auto block = static_cast<std::int64_t>(bit - block_end_.begin());
  std::int64_t start = kDense + block * kBlock;  // last x of previous block
  if (start >= last_) return last_;
  CompensatedSum sum;
  sum.add(block == 0 ? dense_.back() : block_end_[block - 1]);
  const std::int64_t stop = std::min(start + kBlock, last_);
  for (std::int64_t x = start + 1; x <= stop; ++x) {
    sum.add(model_.pmf(x));
    if (sum.value() > u) return x;
  }
  return stop;
}

FrequencyTable Sampler::draw(std::int64_t count, std::uint64_t seed) const {
  if (count < 1) throw EmptyInputError("sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::map<std::int64_t, std::int64_t> tally;
  for (std::int64_t i = 0; i < count; ++i) ++tally[invert(uniform01(rng))];
  std::vector<FrequencyRow> rows;
  rows.reserve(tally.size());
  for (const auto &[x, c] : tally) rows.push_back({x, c});
  return FrequencyTable(std::move(rows));
}

FrequencyTable sample(const ModelParams &params, std::int64_t count,
                      std::uint64_t seed) {
  if (count < 1) throw EmptyInputError("sample count must be >= 1");
  return Sampler(params).draw(count, seed);
}

}  // namespace powerfit
