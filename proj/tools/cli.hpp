#pragma once

// Command-line front end: configuration, the four commands, and the CSV/JSON
// table writers. main() is a thin wrapper around run().

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace condana::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kFlagged = 2, kNumerical = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string problem;
  /// Comma-separated coordinates, "random", or empty for the problem's test point.
  std::string point;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::vector<double> deltas;
  std::string format = "csv";
  /// Empty means standard output.
  std::string output_path;
  std::optional<std::pair<unsigned, unsigned>> m_range;
  std::optional<std::pair<unsigned, unsigned>> n_range;
  unsigned trials = 0;
  unsigned threads = 0;
  std::vector<std::string> checks;

  void validate() const;
};

/// Empty cells stand for flagged or undefined values.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
  Table table;
  int exit_code = kOk;
};

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double v);

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

/// "a:b" or a single "a"; throws UsageError.
std::pair<unsigned, unsigned> parse_range(const std::string& text);
/// Comma-separated reals; throws UsageError.
std::vector<double> parse_reals(const std::string& text);

CommandResult run_analyze(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg);
CommandResult run_sweep(const RunConfig& cfg);
CommandResult run_moments(const RunConfig& cfg);

/// Dispatches on cfg.command, writes the table to cfg.output_path (or `out`)
/// and maps library exceptions to exit codes, reporting them on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11), applies CONDANA_SEED, then run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace condana::cli
