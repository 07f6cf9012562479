#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/results.hpp"
#include "vnfsdn/scenario/runner.hpp"
#include "vnfsdn/scenario/targets.hpp"

namespace vnfsdn::scenario {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("vnfsdn_results_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_wall_clock(std::string text) {
  static const std::regex stamp(R"re("generated_at":"[^"]*")re");
  return std::regex_replace(text, stamp, R"("generated_at":"")");
}

ScenarioResult short_run() {
  auto cfg = load_config(6, std::nullopt, {"duration_s=8"});
  RunOptions opts;
  opts.capture_dir = scratch("capture");
  return run_scenario(cfg, opts);
}

const ScenarioResult& shared_run() {
  static const ScenarioResult r = short_run();
  return r;
}

TEST(Results, SameRunTwiceWritesIdenticalBytes) {
  auto again = short_run();
  for (auto format : {OutputFormat::Csv, OutputFormat::Records}) {
    auto a = emit_results(shared_run(), format, scratch("det_a"));
    auto b = emit_results(again, format, scratch("det_b"));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].filename(), b[i].filename());
      EXPECT_EQ(without_wall_clock(slurp(a[i])), without_wall_clock(slurp(b[i]))) << a[i];
    }
  }
}

void expect_same_rows(const std::vector<TableRow>& got, const std::vector<TableRow>& want,
                      const std::vector<std::string>& columns) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].config, want[i].config);
    for (const auto& c : columns) {
      auto w = want[i].values.find(c);
      auto g = got[i].values.find(c);
      ASSERT_NE(g, got[i].values.end()) << c;
      std::optional<double> expected = w == want[i].values.end() ? std::nullopt : w->second;
      EXPECT_EQ(g->second, expected) << "row " << i << " column " << c;
    }
  }
}

TEST(Results, TablesParseBackToTheValuesInMemory) {
  const auto& r = shared_run();
  for (auto format : {OutputFormat::Csv, OutputFormat::Records}) {
    auto dir = scratch(format == OutputFormat::Csv ? "parse_csv" : "parse_rec");
    emit_results(r, format, dir);
    const char* ext = format == OutputFormat::Csv ? ".csv" : ".ndrec";
    for (const auto& run : r.runs) {
      auto path = dir / ("s6_" + run.config + "_" + std::to_string(r.seed) + ext);
      expect_same_rows(read_table(path), window_rows(run), window_columns());
    }
    std::vector<TableRow> summary;
    for (const auto& run : r.runs) summary.push_back(summary_row(run));
    expect_same_rows(read_table(dir / ("s6_summary_" + std::to_string(r.seed) + ext)), summary, summary_columns());
  }
}

TEST(Results, EmptyResultWritesHeadersOnly) {
  ScenarioResult empty;
  empty.scenario = 1;
  empty.seed = 3;
  auto dir = scratch("empty");
  auto csv = emit_results(empty, OutputFormat::Csv, dir);
  ASSERT_FALSE(csv.empty());
  for (const auto& p : csv) {
    auto text = slurp(p);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1) << p;
    EXPECT_TRUE(read_table(p).empty());
  }
  auto rec = emit_results(empty, OutputFormat::Records, dir);
  auto summary = slurp(dir / "s1_summary_3.ndrec");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1);
  EXPECT_EQ(figures_of(1), (std::vector<std::string>{"5a", "5b"}));
}

TEST(Results, NumbersRoundTrip) {
  for (double v : {0.0, 1.0, 0.1, 1e-300, 123456789.123456789, 2.0 / 3.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_THROW(parse_output_format("xml"), std::invalid_argument);
}

CalibrationTargets one(const std::string& fields) {
  return CalibrationTargets::parse(R"({"targets": [{"name": "t", "scenario": 1, "metric": "availability_pct", )" +
                                   fields + "}]}");
}

TEST(Targets, ToleranceArithmetic) {
  auto t = one(R"("config": "vnfsdn", "target": 75, "tolerance": 5)").targets.at(0);
  EXPECT_TRUE(t.accepts(76));
  EXPECT_TRUE(t.accepts(80));
  EXPECT_FALSE(t.accepts(60));
  EXPECT_FALSE(t.accepts(80.01));

  auto pct = one(R"("config": "vnfsdn", "target": 200, "tolerance_pct": 10)").targets.at(0);
  EXPECT_DOUBLE_EQ(pct.band(), 20.0);
  EXPECT_TRUE(pct.accepts(181));
  EXPECT_FALSE(pct.accepts(179));

  auto floor = one(R"("config": "vnfsdn", "mode": "at_least", "target": 50, "tolerance": 10)").targets.at(0);
  EXPECT_TRUE(floor.accepts(1000));
  EXPECT_TRUE(floor.accepts(40));
  EXPECT_FALSE(floor.accepts(39.9));
}

TEST(Targets, RejectsMalformedFiles) {
  EXPECT_THROW(one(R"("config": "vnfsdn", "target": 1, "tolerance": 0)"), TargetsError);
  EXPECT_THROW(one(R"("config": "vnfsdn", "target": 1, "tolerance": 1, "tolerance_pct": 1)"), TargetsError);
  EXPECT_THROW(one(R"("config": "vnfsdn", "target": 1, "tolerance": 1, "colour": "red")"), TargetsError);
}

TableRow row(const std::string& config, std::map<std::string, double> values) {
  TableRow t;
  t.config = config;
  for (auto& [k, v] : values) t.values[k] = v;
  return t;
}

TEST(Targets, DerivedKindsCompareAgainstTheirBaseline) {
  auto targets = CalibrationTargets::parse(R"({"targets": [
    {"name": "scaled_a", "scenario": 1, "metric": "benign_loss", "config": "no_security", "kind": "scaled",
     "group": "g", "target": 1500, "tolerance_pct": 15},
    {"name": "scaled_b", "scenario": 1, "metric": "benign_loss", "config": "vnfsdn", "kind": "scaled",
     "group": "g", "target": 750, "tolerance_pct": 15},
    {"name": "scaled_c", "scenario": 1, "metric": "benign_loss", "config": "vnfsdn_firewall", "kind": "scaled",
     "group": "g", "target": 500, "tolerance_pct": 15},
    {"name": "reduction", "scenario": 1, "metric": "response_ms", "config": "vnfsdn", "baseline": "no_security",
     "kind": "reduction_pct", "mode": "at_least", "target": 50, "tolerance": 10},
    {"name": "gain", "scenario": 1, "metric": "availability_pct", "config": "vnfsdn", "baseline": "no_security",
     "kind": "gain_pp", "mode": "at_least", "target": 4, "tolerance": 1},
    {"name": "ratio", "scenario": 1, "metric": "response_ms", "config": "vnfsdn", "baseline": "no_security",
     "kind": "ratio", "target": 0.4, "tolerance": 0.01},
    {"name": "elsewhere", "scenario": 4, "metric": "latency_ms", "config": "vnfsdn", "target": 15, "tolerance": 1}
  ]})");
  std::map<int, std::vector<TableRow>> tables{
      {1,
       {row("no_security", {{"benign_loss", 3000}, {"response_ms", 100}, {"availability_pct", 90}}),
        row("vnfsdn", {{"benign_loss", 1500}, {"response_ms", 40}, {"availability_pct", 94.5}}),
        row("vnfsdn_firewall", {{"benign_loss", 1000}})}}};
  auto report = compare_tables(tables, targets);
  ASSERT_EQ(report.verdicts.size(), 6U);
  EXPECT_EQ(report.skipped, (std::vector<std::string>{"elsewhere"}));
  for (const auto& v : report.verdicts) EXPECT_TRUE(v.pass) << v.target->name;
  EXPECT_DOUBLE_EQ(*report.verdicts[0].measured, 1500.0);
  EXPECT_DOUBLE_EQ(*report.verdicts[3].measured, 60.0);
  EXPECT_DOUBLE_EQ(*report.verdicts[4].measured, 4.5);
  EXPECT_TRUE(report.pass());

  // the firewall configuration now loses as much as the baseline
  tables[1][2].values["benign_loss"] = 3000;
  auto worse = compare_tables(tables, targets);
  EXPECT_FALSE(worse.verdicts[2].pass);
  EXPECT_FALSE(worse.pass());

  // an undefined metric never passes
  tables[1][1].values["response_ms"] = std::nullopt;
  auto undefined = compare_tables(tables, targets);
  EXPECT_FALSE(undefined.verdicts[3].measured);
  EXPECT_FALSE(undefined.verdicts[3].pass);
}

TEST(Targets, NonNormativeFailuresDoNotFailTheReport) {
  auto targets = CalibrationTargets::parse(R"({"targets": [
    {"name": "headline", "scenario": 4, "metric": "throughput_mbps", "config": "vnfsdn", "target": 950,
     "tolerance_pct": 10, "non_normative": true, "note": "x"}]})");
  std::map<int, std::vector<TableRow>> tables{{4, {row("vnfsdn", {{"throughput_mbps", 250}})}}};
  auto report = compare_tables(tables, targets);
  ASSERT_EQ(report.verdicts.size(), 1U);
  EXPECT_FALSE(report.verdicts[0].pass);
  EXPECT_TRUE(report.pass());
}

TEST(Targets, SummariesLoadFromAFolder) {
  const auto& r = shared_run();
  auto dir = scratch("load");
  emit_results(r, OutputFormat::Csv, dir);
  auto loaded = load_summaries(dir);
  ASSERT_EQ(loaded.size(), 1U);
  EXPECT_EQ(loaded.at(6).size(), r.runs.size());

  auto other = r;
  other.seed = r.seed + 1;
  emit_results(other, OutputFormat::Records, dir);
  EXPECT_THROW(load_summaries(dir), MissingMetric);
  EXPECT_EQ(load_summaries(dir, other.seed).at(6).size(), r.runs.size());

  auto direct = compare_to_targets(r, CalibrationTargets::load(fs::path(VNFSDN_CONFIG_DIR) / "targets.json"));
  EXPECT_TRUE(direct.verdicts.empty());
  EXPECT_FALSE(direct.skipped.empty());
}

}  // namespace
}  // namespace vnfsdn::scenario
