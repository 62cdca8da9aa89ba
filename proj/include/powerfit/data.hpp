#ifndef POWERFIT_DATA_HPP
#define POWERFIT_DATA_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace powerfit {

/// One row of a frequency table: `count` individuals share the value `x`.
struct FrequencyRow {
  std::int64_t x = 0;
  std::int64_t count = 0;

  friend bool operator==(const FrequencyRow &, const FrequencyRow &) = default;
};

/// Distinct positive integer values with their multiplicities, strictly
/// increasing in x. Immutable once built.
class FrequencyTable {
 public:
  /// Validates and sorts. Throws DuplicateXError, EmptyInputError, or
  /// InvalidParamsError (x < 1 or count < 1).
  explicit FrequencyTable(std::vector<FrequencyRow> rows);

  std::span<const FrequencyRow> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  std::int64_t n() const { return n_; }
  std::int64_t x_max() const { return rows_.back().x; }
  std::int64_t x_min() const { return rows_.front().x; }

  friend bool operator==(const FrequencyTable &, const FrequencyTable &) =
      default;

 private:
  std::vector<FrequencyRow> rows_;
  std::int64_t n_ = 0;
};

struct CurvePoint {
  std::int64_t x = 0;
  double y = 0.0;
};

/// (x, y) pairs for curve fitting; y is a fraction, not a percentage.
struct CurveData {
  std::vector<CurvePoint> points;
};

/// n, sum of z_i and sum of ln z_i. Both model likelihoods depend on the data
/// only through these.
struct SufficientStats {
  std::int64_t n = 0;
  std::int64_t sum_z = 0;
  double sum_log_z = 0.0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Parses `x,count` CSV (header required, `#` comments, LF or CRLF).
FrequencyTable load_frequency_table(std::istream &in);

/// Writes the same CSV format `load_frequency_table` reads.
void write_frequency_table(std::ostream &out, const FrequencyTable &table);

SufficientStats sufficient_stats(const FrequencyTable &table);

/// Fraction of observations <= x.
double empirical_cdf(const FrequencyTable &table, std::int64_t x);

/// Untruncated curve, y = count / n.
CurveData to_curve(const FrequencyTable &table);

/// Keep points with x <= x_cut, y unchanged (the result sums to < 1).
CurveData truncate_distribution(const CurveData &curve, std::int64_t x_cut);

/// Keep rows with x <= x_cut and renormalise y over the retained range.
CurveData truncate_data(const FrequencyTable &table, std::int64_t x_cut);
CurveData truncate_data(const CurveData &curve, std::int64_t x_cut);

/// 64-bit FNV-1a of the canonical CSV serialization; used for provenance.
std::uint64_t table_checksum(const FrequencyTable &table);

}  // namespace powerfit

#endif  // POWERFIT_DATA_HPP
