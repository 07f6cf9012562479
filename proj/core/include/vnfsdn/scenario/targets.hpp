#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfsdn/scenario/results.hpp"

namespace vnfsdn::scenario {

class MissingMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TargetsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Target {
  enum class Kind : std::uint8_t {
    Value,         // metric of config
    Ratio,         // config / baseline
    ReductionPct,  // (baseline - config) / baseline * 100
    GainPp,        // config - baseline
    Scaled,        // config / s where s = sum(measured) / sum(target) over the group
  };
  enum class Mode : std::uint8_t { Within, AtLeast, AtMost };

  std::string name;
  int scenario = 0;
  std::string metric;
  std::string config;
  std::string baseline;  // Ratio, ReductionPct, GainPp
  std::string group;     // Scaled
  std::optional<double> ues;
  Kind kind = Kind::Value;
  Mode mode = Mode::Within;
  double target = 0.0;
  double tolerance = 0.0;
  bool relative = false;  // tolerance given as a fraction of the target
  bool non_normative = false;

  /// Absolute half-width of the acceptance band.
  double band() const;
  bool accepts(double measured) const;
};

struct CalibrationTargets {
  std::vector<Target> targets;

  /// Throws TargetsError on unknown keys or a non-positive tolerance.
  static CalibrationTargets parse(const std::string& text);
  static CalibrationTargets load(const std::filesystem::path& path);
};

struct TargetVerdict {
  const Target* target = nullptr;
  std::optional<double> measured;  // nullopt when the metric is undefined in the result
  bool pass = false;
};

struct TargetReport {
  std::vector<TargetVerdict> verdicts;
  std::vector<std::string> skipped;  // targets of scenarios absent from the input

  /// True when every normative target passes.
  bool pass() const;
};

/// Evaluates the targets of r.scenario against its run summaries.
TargetReport compare_to_targets(const ScenarioResult& r, const CalibrationTargets& targets);

/// Summary tables per scenario, for example read back from s<N>_summary_<seed> files.
TargetReport compare_tables(const std::map<int, std::vector<TableRow>>& summaries, const CalibrationTargets& targets);

/// Loads every s<N>_summary_<seed>.{csv,ndrec} in dir. Throws MissingMetric
/// when one scenario has summaries for several seeds and seed is not given.
std::map<int, std::vector<TableRow>> load_summaries(const std::filesystem::path& dir,
                                                    std::optional<std::uint64_t> seed = std::nullopt);

std::string to_string(Target::Kind k);
std::string to_string(Target::Mode m);

}  // namespace vnfsdn::scenario
