#include "powerfit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace powerfit {

namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<double> &v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string opt_text(const std::optional<double> &v) {
  return v ? format_sig(*v) : "-";
}

// Left-aligned columns, two spaces apart.
void write_columns(std::ostream &out,
                   const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> width;
  for (const auto &row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  for (const auto &row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

std::vector<std::string> fit_header() {
  return {"method", "alpha", "b", "beta", "log_likelihood", "objective",
          "converged", "iterations"};
}

std::vector<std::string> fit_cells(const FitResult &fit) {
  return {std::string(to_string(fit.method)),
          format_sig(fit.alpha),
          opt_text(fit.b),
          opt_text(fit.beta),
          opt_text(fit.log_likelihood),
          format_sig(fit.objective),
          fit.converged ? "yes" : "no",
          std::to_string(fit.iterations)};
}

std::string join_csv(const std::vector<std::string> &cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i] == "-" ? "" : cells[i];
  }
  return line;
}

}  // namespace

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

EstimatorTable build_estimator_table(const FrequencyTable &table,
                                     const CurveData &curve) {
  EstimatorTable t;
  t.rows.push_back(fit_ols_loglog(curve));
  t.rows.push_back(fit_constrained_ols(curve));
  t.rows.push_back(fit_nls(curve));
  t.rows.push_back(fit_constrained_nls(curve));
  t.rows.push_back(fit_mle_power_law(sufficient_stats(table)));
  return t;
}

TruncationComparison compare_truncations(const FrequencyTable &table,
                                         std::int64_t x_cut) {
  const CurveData full = to_curve(table);
  return {x_cut, fit_ols_loglog(truncate_distribution(full, x_cut)),
          fit_ols_loglog(truncate_data(table, x_cut))};
}

Provenance provenance_of(const FrequencyTable &table) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(table_checksum(table)));
  return {hex, kLibraryVersion, table.n(), table.size(), table.x_max()};
}

Json to_json(const FitResult &fit) {
  Json j;
  j["method"] = to_string(fit.method);
  j["alpha"] = fit.alpha;
  j["b"] = opt(fit.b);
  j["beta"] = opt(fit.beta);
  j["log_likelihood"] = opt(fit.log_likelihood);
  j["objective"] = fit.objective;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["gradient_norm"] = opt(fit.gradient_norm);
  return j;
}

Json to_json(const LrTestResult &lr) {
  return Json{{"statistic", lr.statistic},
              {"p_value", lr.p_value},
              {"dof", lr.dof},
              {"level", lr.level},
              {"critical_value", lr.critical_value},
              {"reject_null", lr.reject_null},
              {"boundary_null_warning", lr.boundary_null_warning}};
}

Json to_json(const KsResult &ks) {
  return Json{{"d_statistic", ks.d_statistic},
              {"argmax_x", ks.argmax_x},
              {"critical_value_95", ks.critical_value_95},
              {"reject", ks.reject},
              {"conservative_threshold", ks.conservative_threshold}};
}

Json to_json(const ComparisonReport &report) {
  Json rows = Json::array();
  for (const auto &row : report.rows) {
    rows.push_back(Json{{"hypothesis", row.name},
                        {"description", row.label},
                        {"fit", to_json(row.fit)},
                        {"lr_test", row.lr ? to_json(*row.lr) : Json(nullptr)},
                        {"ks", to_json(row.ks)}});
  }
  const auto &p = report.proximity;
  return Json{{"n", report.n},
              {"x_max", report.x_max},
              {"beta_probe", report.beta_probe},
              {"hypotheses", rows},
              {"proximity", Json{{"x_max", p.x_max},
                                 {"max_abs_diff", p.max_abs_diff},
                                 {"ratio_min", p.ratio_min},
                                 {"ratio_max", p.ratio_max}}}};
}

Json to_json(const EstimatorTable &table) {
  Json rows = Json::array();
  for (const auto &fit : table.rows) rows.push_back(to_json(fit));
  return Json{{"estimators", rows}};
}

Json to_json(const TruncationComparison &cmp) {
  return Json{{"x_cut", cmp.x_cut},
              {"truncate_distribution", to_json(cmp.distribution)},
              {"truncate_data", to_json(cmp.data)},
              {"slope_difference", cmp.distribution.alpha - cmp.data.alpha}};
}

Json to_json(const Provenance &prov) {
  return Json{{"dataset_checksum", prov.dataset_checksum},
              {"library_version", prov.library_version},
              {"n", prov.n},
              {"rows", prov.rows},
              {"x_max", prov.x_max}};
}

void write_text(std::ostream &out, const FitResult &fit) {
  write_columns(out, {fit_header(), fit_cells(fit)});
}

void write_text(std::ostream &out, const KsResult &ks) {
  write_columns(out, {{"D", "argmax_x", "critical_95", "reject"},
                      {format_sig(ks.d_statistic), std::to_string(ks.argmax_x),
                       format_sig(ks.critical_value_95),
                       ks.reject ? "yes" : "no"}});
  out << "critical value 1.36/sqrt(n) is conservative for discrete models\n";
}

void write_text(std::ostream &out, const ComparisonReport &report) {
  out << "Log likelihood comparison (n = " << report.n
      << ", x_max = " << report.x_max << ")\n";
  std::vector<std::vector<std::string>> rows = {
      {"hypothesis", "alpha", "beta", "log_likelihood", "-2ln(lambda)",
       "p_value", "KS_D", "KS_argmax"}};
  for (const auto &row : report.rows) {
    rows.push_back({row.name, format_sig(row.fit.alpha),
                    row.fit.beta ? format_sig(*row.fit.beta) : "0",
                    opt_text(row.fit.log_likelihood),
                    row.lr ? format_sig(row.lr->statistic) : "-",
                    row.lr ? format_sig(row.lr->p_value) : "-",
                    format_sig(row.ks.d_statistic),
                    std::to_string(row.ks.argmax_x)});
  }
  write_columns(out, rows);
  if (!report.rows.empty()) {
    const auto &ks = report.rows.front().ks;
    out << "KS critical value (95%, conservative): "
        << format_sig(ks.critical_value_95) << '\n';
  }
  for (const auto &row : report.rows) {
    if (!row.lr) continue;
    out << row.name << " vs p_a: "
        << (row.lr->reject_null ? "reject" : "do not reject") << " at "
        << format_sig(row.lr->level) << " (critical "
        << format_sig(row.lr->critical_value) << ")";
    if (row.lr->boundary_null_warning) {
      out << "; null on the beta = 0 boundary, chi-squared reference not "
             "justified";
    }
    out << '\n';
  }
  for (const auto &row : report.rows) {
    if (row.ks.reject) {
      out << row.name
          << ": KS exceeds the conservative threshold; may still be within "
             "acceptance\n";
    }
  }
  const auto &p = report.proximity;
  out << "p_0/p_1 proximity on [1, " << p.x_max
      << "]: max |diff| = " << format_sig(p.max_abs_diff) << ", ratio in ["
      << format_sig(p.ratio_min) << ", " << format_sig(p.ratio_max) << "]\n";
}

void write_text(std::ostream &out, const EstimatorTable &table) {
  std::vector<std::vector<std::string>> rows = {
      {"method", "alpha", "b", "objective", "converged", "iterations"}};
  for (const auto &fit : table.rows) {
    rows.push_back({std::string(to_string(fit.method)), format_sig(fit.alpha),
                    opt_text(fit.b), format_sig(fit.objective),
                    fit.converged ? "yes" : "no",
                    std::to_string(fit.iterations)});
  }
  write_columns(out, rows);
}

void write_text(std::ostream &out, const TruncationComparison &cmp) {
  out << "OLS log-log at x <= " << cmp.x_cut << '\n';
  write_columns(
      out, {{"truncation", "alpha", "b"},
            {"distribution", format_sig(cmp.distribution.alpha),
             opt_text(cmp.distribution.b)},
            {"data", format_sig(cmp.data.alpha), opt_text(cmp.data.b)}});
}

void write_text(std::ostream &out, const Provenance &prov) {
  out << "dataset checksum " << prov.dataset_checksum << ", n = " << prov.n
      << ", rows = " << prov.rows << ", x_max = " << prov.x_max
      << ", powerfit " << prov.library_version << '\n';
}

void write_csv(std::ostream &out, const std::vector<FitResult> &fits) {
  out << join_csv(fit_header()) << '\n';
  for (const auto &fit : fits) out << join_csv(fit_cells(fit)) << '\n';
}

void write_csv(std::ostream &out, const KsResult &ks) {
  out << "d_statistic,argmax_x,critical_value_95,reject\n"
      << format_sig(ks.d_statistic) << ',' << ks.argmax_x << ','
      << format_sig(ks.critical_value_95) << ',' << (ks.reject ? 1 : 0)
      << '\n';
}

void write_csv(std::ostream &out, const ComparisonReport &report) {
  out << "hypothesis,alpha,beta,log_likelihood,lr_statistic,p_value,ks_d,"
         "ks_argmax\n";
  for (const auto &row : report.rows) {
    out << join_csv({row.name, format_sig(row.fit.alpha),
                     row.fit.beta ? format_sig(*row.fit.beta) : "0",
                     opt_text(row.fit.log_likelihood),
                     row.lr ? format_sig(row.lr->statistic) : "-",
                     row.lr ? format_sig(row.lr->p_value) : "-",
                     format_sig(row.ks.d_statistic),
                     std::to_string(row.ks.argmax_x)})
        << '\n';
  }
}

}  // namespace powerfit
