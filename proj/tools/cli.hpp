#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shorsim/pipeline.hpp"

namespace shorsim::cli {

enum class OutputFormat { Csv, Json, Gnuplot };

struct RunConfig {
  ExperimentConfig experiment;
  std::optional<std::uint64_t> r2_slice;
  std::string out;     // file for csv/json, directory for gnuplot; empty means stdout
  std::string report;  // optional path for the JSON factoring report
  OutputFormat format = OutputFormat::Csv;
};

/// Defaults: n=15, x=7, q=130, 10 events, exponential clock with gamma=2.5,
/// watchdog on.
RunConfig default_run_config();

class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

/// Parses the `run` flags (program name excluded). `--config <file>` reads
/// TOML/INI-style defaults. Throws UsageError on conflicting or bad values;
/// --help also throws, with exit code 0 and the help text as message.
RunConfig parse_config(const std::vector<std::string>& args);

struct CsvRow {
  std::uint64_t r1 = 0;
  std::uint64_t r2 = 0;
  double p_ned = 0.0;
  double p_ed = 0.0;
};

/// Header `r1,r2,p_ned,p_ed`, then row-major rows at 12 significant digits.
/// Only the given r2 column when `r2_slice` is set.
void emit_csv(std::ostream& out, const FinalDistributions& d,
              std::optional<std::uint64_t> r2_slice = std::nullopt);
void emit_json(std::ostream& out, const FinalDistributions& d,
               std::optional<std::uint64_t> r2_slice = std::nullopt);

/// Writes `<kind>_r2_<k>.dat` ("r1 p" lines) for exact, ned and ed on each
/// slice, plus plot.gp. Without a slice every r2 with nonzero exact weight
/// is written.
void emit_gnuplot(const std::filesystem::path& dir, const FinalDistributions& d,
                  const Distribution& exact, std::optional<std::uint64_t> r2_slice = std::nullopt);

std::vector<CsvRow> read_csv(std::istream& in);

/// Entry point of the shorsim tool: `run` (default), `build`, `verify`.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace shorsim::cli
