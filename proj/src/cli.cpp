#include "powerfit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "powerfit/comparison.hpp"
#include "powerfit/data.hpp"
#include "powerfit/distributions.hpp"
#include "powerfit/errors.hpp"
#include "powerfit/estimators.hpp"
#include "powerfit/report.hpp"

#ifndef POWERFIT_DEFAULT_DATA
#define POWERFIT_DEFAULT_DATA ""
#endif

namespace powerfit::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, OutputFormat> kFormats = {
    {"json", OutputFormat::Json},
    {"text", OutputFormat::Text},
    {"csv", OutputFormat::Csv}};

OutputFormat resolve_format(const CommandConfig &config) {
  if (config.output_format) return *config.output_format;
  if (config.command == Command::Sample) return OutputFormat::Csv;
  if (const char *env = std::getenv(kFormatEnv)) {
    const auto it = kFormats.find(env);
    if (it == kFormats.end()) {
      throw InvalidParamsError(std::string(kFormatEnv) + " must be one of "
                               "json, text, csv; got '" + env + "'");
    }
    return it->second;
  }
  return OutputFormat::Json;
}

FrequencyTable read_table(const CommandConfig &config, std::istream &in) {
  std::string path = config.input_path;
  if (path.empty() && config.command == Command::Tables) {
    path = POWERFIT_DEFAULT_DATA;
  }
  if (path.empty() || path == "-") return load_frequency_table(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open '" + path + "'");
  return load_frequency_table(file);
}

// Rows with x <= x_cut; the likelihood fits see only these.
FrequencyTable truncate_rows(const FrequencyTable &table, std::int64_t x_cut) {
  std::vector<FrequencyRow> kept;
  for (const auto &row : table.rows()) {
    if (row.x <= x_cut) kept.push_back(row);
  }
  if (kept.empty()) {
    throw EmptyResultError("no rows with x <= " + std::to_string(x_cut));
  }
  return FrequencyTable(std::move(kept));
}

CurveData curve_for(const CommandConfig &config, const FrequencyTable &table) {
  if (!config.truncate_at) return to_curve(table);
  if (config.truncate_mode == TruncateMode::Data) {
    return truncate_data(table, *config.truncate_at);
  }
  return truncate_distribution(to_curve(table), *config.truncate_at);
}

ModelParams model_from_flags(const CommandConfig &config) {
  if (!config.alpha) throw InvalidParamsError("--alpha is required");
  const double beta = config.beta.value_or(0.0);
  ModelParams params = beta == 0.0
                           ? ModelParams{PowerLawParams{*config.alpha}}
                           : ModelParams{CutoffParams{*config.alpha, beta}};
  validate(params);
  return params;
}

void emit_json(std::ostream &out, const Json &j) { out << j.dump(2) << '\n'; }

void run_fit(const CommandConfig &config, const FrequencyTable &full,
             OutputFormat format, std::ostream &out) {
  const auto method = parse_fit_method(config.method);
  if (!method) throw InvalidParamsError("unknown method '" + config.method + "'");
  const CurveData curve = curve_for(config, full);
  const FrequencyTable table =
      config.truncate_at ? truncate_rows(full, *config.truncate_at) : full;
  const FitResult result =
      fit(*method, table, curve, config.beta.value_or(-1e-6));
  switch (format) {
    case OutputFormat::Json: emit_json(out, to_json(result)); break;
    case OutputFormat::Text: write_text(out, result); break;
    case OutputFormat::Csv: write_csv(out, std::vector<FitResult>{result}); break;
  }
}

void run_compare(const CommandConfig &config, const FrequencyTable &full,
                 OutputFormat format, std::ostream &out) {
  const FrequencyTable table =
      config.truncate_at ? truncate_rows(full, *config.truncate_at) : full;
  const ComparisonReport report =
      build_comparison_report(table, config.beta_probe);
  switch (format) {
    case OutputFormat::Json: emit_json(out, to_json(report)); break;
    case OutputFormat::Text: write_text(out, report); break;
    case OutputFormat::Csv: write_csv(out, report); break;
  }
}

void run_ks(const CommandConfig &config, const FrequencyTable &table,
            OutputFormat format, std::ostream &out) {
  const KsResult ks = ks_statistic(table, model_from_flags(config));
  switch (format) {
    case OutputFormat::Json: emit_json(out, to_json(ks)); break;
    case OutputFormat::Text: write_text(out, ks); break;
    case OutputFormat::Csv: write_csv(out, ks); break;
  }
}

void run_sample(const CommandConfig &config, OutputFormat format,
                std::ostream &out) {
  const FrequencyTable table =
      sample(model_from_flags(config), config.count, config.seed);
  if (format != OutputFormat::Json) {
    write_frequency_table(out, table);
    return;
  }
  Json rows = Json::array();
  for (const auto &row : table.rows()) rows.push_back({row.x, row.count});
  emit_json(out, Json{{"alpha", *config.alpha},
                      {"beta", config.beta.value_or(0.0)},
                      {"count", config.count},
                      {"seed", config.seed},
                      {"rows", rows}});
}

void run_tables(const CommandConfig &config, const FrequencyTable &table,
                OutputFormat format, std::ostream &out) {
  const Provenance prov = provenance_of(table);
  const EstimatorTable estimators =
      build_estimator_table(table, to_curve(table));
  const ComparisonReport report =
      build_comparison_report(table, config.beta_probe);
  std::optional<TruncationComparison> truncation;
  if (config.truncate_at) {
    truncation = compare_truncations(table, *config.truncate_at);
  }
  switch (format) {
    case OutputFormat::Json: {
      Json j{{"provenance", to_json(prov)},
             {"table1", to_json(estimators)},
             {"table2", to_json(report)}};
      if (truncation) j["truncation"] = to_json(*truncation);
      emit_json(out, j);
      break;
    }
    case OutputFormat::Text:
      write_text(out, prov);
      out << "\nTable 1: power law estimates on the full curve\n";
      write_text(out, estimators);
      out << "\nTable 2: ";
      write_text(out, report);
      if (truncation) {
        out << '\n';
        write_text(out, *truncation);
      }
      break;
    case OutputFormat::Csv: {
      out << "# table1\n";
      write_csv(out, estimators.rows);
      out << "# table2\n";
      write_csv(out, report);
      break;
    }
  }
}

}  // namespace

int run(const CommandConfig &config, std::istream &in, std::ostream &out,
        std::ostream &err) {
  // Render into a buffer so a failure never leaves partial output behind.
  std::ostringstream buffer;
  try {
    const OutputFormat format = resolve_format(config);
    if (config.truncate_at && *config.truncate_at < 1) {
      throw InvalidParamsError("--truncate-at must be >= 1");
    }
    switch (config.command) {
      case Command::Fit: run_fit(config, read_table(config, in), format, buffer); break;
      case Command::Compare: run_compare(config, read_table(config, in), format, buffer); break;
      case Command::Ks: run_ks(config, read_table(config, in), format, buffer); break;
      case Command::Sample: run_sample(config, format, buffer); break;
      case Command::Tables: run_tables(config, read_table(config, in), format, buffer); break;
    }
  } catch (const ConvergenceError &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConvergenceError;
  } catch (const NotConvergedError &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConvergenceError;
  } catch (const BoundaryError &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConvergenceError;
  } catch (const DataError &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kDataError;
  } catch (const NumericalError &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConvergenceError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConvergenceError;
  }
  out << buffer.str();
  return exit_code::kOk;
}

int main_entry(int argc, const char *const *argv, std::istream &in,
               std::ostream &out, std::ostream &err) {
  CLI::App app{"Fit and compare discrete power laws on frequency tables",
               "powerfit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  CommandConfig config;
  std::string format;
  std::string truncate_mode = "distribution";

  const auto add_common = [&](CLI::App *sub, bool takes_input) {
    if (takes_input) {
      sub->add_option("input", config.input_path,
                      "Frequency CSV (x,count); '-' or omitted reads stdin");
    }
    sub->add_option("--format", format, "json | text | csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
  };
  const auto add_truncation = [&](CLI::App *sub) {
    auto *at = sub->add_option("--truncate-at", config.truncate_at,
                               "Keep x <= this value");
    sub->add_option("--truncate-mode", truncate_mode,
                    "distribution (keep head probabilities) | data "
                    "(renormalise over retained range)")
        ->check(CLI::IsMember({"distribution", "data"}))
        ->needs(at);
  };

  auto *fit_cmd = app.add_subcommand("fit", "Fit one estimator");
  add_common(fit_cmd, true);
  fit_cmd->add_option("--method", config.method,
                      "ols-loglog | constrained-ols | nls | constrained-nls | "
                      "mle-powerlaw | mle-cutoff | mle-fixed-beta")
      ->check(CLI::IsMember({"ols-loglog", "constrained-ols", "nls",
                             "constrained-nls", "mle-powerlaw", "mle-cutoff",
                             "mle-fixed-beta"}));
  fit_cmd->add_option("--beta", config.beta,
                      "Fixed beta for mle-fixed-beta (default -1e-6)");
  add_truncation(fit_cmd);

  auto *compare_cmd =
      app.add_subcommand("compare", "Cutoff vs power law: LR and KS tests");
  add_common(compare_cmd, true);
  compare_cmd->add_option("--beta-probe", config.beta_probe,
                          "Fixed beta of the interior null (default -1e-6)");
  add_truncation(compare_cmd);

  auto *ks_cmd = app.add_subcommand("ks", "KS distance to a given model");
  add_common(ks_cmd, true);
  ks_cmd->add_option("--alpha", config.alpha, "Exponent")->required();
  ks_cmd->add_option("--beta", config.beta, "Cutoff rate <= 0 (default 0)");

  auto *sample_cmd = app.add_subcommand("sample", "Draw a synthetic table");
  add_common(sample_cmd, false);
  sample_cmd->add_option("--alpha", config.alpha, "Exponent")->required();
  sample_cmd->add_option("--beta", config.beta, "Cutoff rate <= 0 (default 0)");
  sample_cmd->add_option("--count", config.count, "Number of draws (default 1000)");
  sample_cmd->add_option("--seed", config.seed, "RNG seed (default 0)");

  auto *tables_cmd = app.add_subcommand(
      "tables", "Estimator table and log-likelihood comparison with provenance");
  add_common(tables_cmd, true);
  tables_cmd->add_option("--beta-probe", config.beta_probe,
                         "Fixed beta of the interior null (default -1e-6)");
  tables_cmd->add_option("--truncate-at", config.truncate_at,
                         "Also compare OLS under both truncations at this x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kDataError;
  }

  if (fit_cmd->parsed()) config.command = Command::Fit;
  if (compare_cmd->parsed()) config.command = Command::Compare;
  if (ks_cmd->parsed()) config.command = Command::Ks;
  if (sample_cmd->parsed()) config.command = Command::Sample;
  if (tables_cmd->parsed()) config.command = Command::Tables;
  if (!format.empty()) config.output_format = kFormats.at(format);
  config.truncate_mode = truncate_mode == "data" ? TruncateMode::Data
                                                 : TruncateMode::Distribution;
  return run(config, in, out, err);
}

}  // namespace powerfit::cli
