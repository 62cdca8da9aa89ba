#ifndef POWERFIT_CLI_HPP
#define POWERFIT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace powerfit::cli {

enum class Command { Fit, Compare, Ks, Sample, Tables };
enum class OutputFormat { Json, Text, Csv };
enum class TruncateMode { Distribution, Data };

/// Environment variable consulted for the default --format.
inline constexpr const char *kFormatEnv = "POWERFIT_FORMAT";

struct CommandConfig {
  Command command = Command::Fit;
  std::string input_path;  // empty or "-" reads stdin
  // Unset: $POWERFIT_FORMAT, else json. `sample` ignores the environment
  // and defaults to csv so its output pipes straight into `fit`.
  std::optional<OutputFormat> output_format;
  std::string method = "mle-powerlaw";
  std::optional<double> alpha;
  std::optional<double> beta;  // ks, sample: 0; fit --method mle-fixed-beta: -1e-6
  std::int64_t count = 1000;
  std::uint64_t seed = 0;
  double beta_probe = -1e-6;
  std::optional<std::int64_t> truncate_at;
  TruncateMode truncate_mode = TruncateMode::Distribution;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kConvergenceError = 2;
}  // namespace exit_code

/// Executes one command. Errors become a one-line message on `err` and the
/// matching exit code; nothing is thrown.
int run(const CommandConfig &config, std::istream &in, std::ostream &out,
        std::ostream &err);

/// Parses argv (argv[0] is the program name) and calls run().
int main_entry(int argc, const char *const *argv, std::istream &in,
               std::ostream &out, std::ostream &err);

}  // namespace powerfit::cli

#endif  // POWERFIT_CLI_HPP
