#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfsdn/scenario/runner.hpp"

namespace vnfsdn::scenario {

enum class OutputFormat : std::uint8_t { Csv, Records };

OutputFormat parse_output_format(const std::string& s);

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named values of one table row; nullopt marks an undefined metric.
using Row = std::map<std::string, std::optional<double>>;

struct TableRow {
  std::string config;
  Row values;
};

/// Column order of the per-window files (after config and ues).
const std::vector<std::string>& window_columns();
/// Column order of the run summary file (after config and ues).
const std::vector<std::string>& summary_columns();

/// One row per window of the run.
std::vector<TableRow> window_rows(const RunResult& r);
/// Run-level KPIs and formula metrics.
TableRow summary_row(const RunResult& r);

/// Writes s<N>_<config>_<seed>.{csv,ndrec}, s<N>_summary_<seed>.{csv,ndrec}
/// and the plot-data files of the scenario into dir. Returns every path written.
std::vector<std::filesystem::path> emit_results(const ScenarioResult& r, OutputFormat format,
                                                const std::filesystem::path& dir);

/// Plot-data file names produced for a scenario, e.g. {"5a", "5b"} for scenario 1.
std::vector<std::string> figures_of(int scenario);

/// Reads a table written by emit_results in either format.
std::vector<TableRow> read_table(const std::filesystem::path& path);

/// Shortest round-trip decimal form used in every output file.
std::string format_number(double v);

}  // namespace vnfsdn::scenario
