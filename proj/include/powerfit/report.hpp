#ifndef POWERFIT_REPORT_HPP
#define POWERFIT_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "powerfit/comparison.hpp"
#include "powerfit/data.hpp"
#include "powerfit/estimators.hpp"

namespace powerfit {

inline constexpr const char *kLibraryVersion = POWERFIT_VERSION;

/// `v` printed with `digits` significant digits ("%.*g").
std::string format_sig(double v, int digits = 7);

/// Five curve and likelihood estimators on one curve: OLS, constrained OLS,
/// NLS, constrained NLS, power-law MLE.
struct EstimatorTable {
  std::vector<FitResult> rows;
};

EstimatorTable build_estimator_table(const FrequencyTable &table,
                                     const CurveData &curve);

/// OLS log-log slope under both truncation semantics at the same cut.
/// The log-log curves differ only by a constant, so the slopes agree.
struct TruncationComparison {
  std::int64_t x_cut = 0;
  FitResult distribution;  // head probabilities kept as-is
  FitResult data;          // renormalised over the retained range
};

TruncationComparison compare_truncations(const FrequencyTable &table,
                                         std::int64_t x_cut);

struct Provenance {
  std::string dataset_checksum;  // 16 hex digits
  std::string library_version;
  std::int64_t n = 0;
  std::size_t rows = 0;
  std::int64_t x_max = 0;
};

Provenance provenance_of(const FrequencyTable &table);

// JSON (full double precision).
nlohmann::ordered_json to_json(const FitResult &fit);
nlohmann::ordered_json to_json(const LrTestResult &lr);
nlohmann::ordered_json to_json(const KsResult &ks);
nlohmann::ordered_json to_json(const ComparisonReport &report);
nlohmann::ordered_json to_json(const EstimatorTable &table);
nlohmann::ordered_json to_json(const TruncationComparison &cmp);
nlohmann::ordered_json to_json(const Provenance &prov);

// Aligned-column text (7 significant digits).
void write_text(std::ostream &out, const FitResult &fit);
void write_text(std::ostream &out, const KsResult &ks);
void write_text(std::ostream &out, const ComparisonReport &report);
void write_text(std::ostream &out, const EstimatorTable &table);
void write_text(std::ostream &out, const TruncationComparison &cmp);
void write_text(std::ostream &out, const Provenance &prov);

// CSV, one header line (7 significant digits).
void write_csv(std::ostream &out, const std::vector<FitResult> &fits);
void write_csv(std::ostream &out, const KsResult &ks);
void write_csv(std::ostream &out, const ComparisonReport &report);

}  // namespace powerfit

#endif  // POWERFIT_REPORT_HPP
