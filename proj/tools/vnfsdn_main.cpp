#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vnfsdn/dataplane/capture.hpp"
#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/results.hpp"
#include "vnfsdn/scenario/runner.hpp"
#include "vnfsdn/scenario/targets.hpp"

namespace {

using namespace vnfsdn;

constexpr int kOk = 0;
constexpr int kTargetFailure = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string default_out_dir() {
  const char* env = std::getenv("VNFSDN_OUT_DIR");
  return env && *env ? env : "results";
}

std::string show(const std::optional<double>& v, int digits = 3) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string("-");
}

void print_summary(const scenario::ScenarioResult& r) {
  fmt::print("scenario {} seed {} config digest {}\n", r.scenario, r.seed, r.digest);
  fmt::print("{:<16} {:>4} {:>9} {:>9} {:>8} {:>8} {:>8} {:>9} {:>6} {:>9} {:>9}\n", "config", "ues", "ben_loss",
             "avail%", "min%", "lat_ms", "jit_ms", "thr_mbps", "tdr", "resp_ms", "events");
  for (const auto& run : r.runs) {
    auto row = scenario::summary_row(run).values;
    fmt::print("{:<16} {:>4} {:>9} {:>9} {:>8} {:>8} {:>8} {:>9} {:>6} {:>9} {:>9}\n", run.config, run.ues,
               run.report.run.benign_loss, show(row["availability_pct"], 2), show(row["availability_min_pct"], 2),
               show(row["latency_ms"], 2), show(row["jitter_ms"], 2), show(row["throughput_mbps"], 1),
               show(row["tdr"], 3), show(row["response_ms"], 1), run.events);
  }
}

int print_report(const scenario::TargetReport& rep) {
  for (const auto& v : rep.verdicts) {
    const auto& t = *v.target;
    fmt::print("{} {:<36} measured {:>10} target {} {} {} ({}){}\n", v.pass ? "PASS" : "FAIL", t.name,
               show(v.measured, 3), scenario::to_string(t.mode), fmt::format("{}", t.target),
               fmt::format("+/- {}", t.band()), scenario::to_string(t.kind), t.non_normative ? " non-normative" : "");
  }
  for (const auto& s : rep.skipped) fmt::print("SKIP {} (scenario not in the result set)\n", s);
  if (rep.verdicts.empty()) throw scenario::MissingMetric("no target covers the scenarios in the result set");
  return rep.pass() ? kOk : kTargetFailure;
}

struct RunArgs {
  int scenario = 1;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> sets;
  std::string targets;
  unsigned threads = 0;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  auto sets = a.sets;
  if (a.seed) sets.push_back(fmt::format("seed={}", *a.seed));
  std::optional<std::filesystem::path> file;
  if (!a.config.empty()) file = a.config;
  auto cfg = scenario::load_config(a.scenario, file, sets);
  auto format = scenario::parse_output_format(a.format);

  scenario::RunOptions opts;
  opts.capture_dir = std::filesystem::path(a.out) / "captures";
  opts.max_threads = a.threads;
  auto result = scenario::run_scenario(cfg, opts);
  auto paths = scenario::emit_results(result, format, a.out);
  if (!a.quiet) {
    print_summary(result);
    for (const auto& p : paths) fmt::print("wrote {}\n", p.string());
  }
  if (a.targets.empty()) return kOk;
  return print_report(scenario::compare_to_targets(result, scenario::CalibrationTargets::load(a.targets)));
}

struct HypothesisArgs {
  std::uint32_t n_max = 16;
  double gamma = 0.1;
  std::string gamma_rule = "scaled";
  double a_n = 1.0;
  double m = 1.0;
  double horizon = 20.0;
  bool simulate = false;
  std::string config;
};

int cmd_hypothesis(const HypothesisArgs& a) {
  if (a.n_max < 2) throw CLI::ValidationError("--n-max", "must be at least 2");
  metrics::AnalyticParams base;
  base.a_n = a.a_n;
  base.m = a.m;
  base.horizon_s = a.horizon;
  metrics::GammaRule rule;
  rule.value = a.gamma;
  if (a.gamma_rule == "fixed") {
    rule.mode = metrics::GammaRule::Mode::Fixed;
  } else if (a.gamma_rule == "scaled") {
    rule.mode = metrics::GammaRule::Mode::ScaledBySqrtN;
  } else {
    throw CLI::ValidationError("--gamma-rule", "must be fixed or scaled");
  }
  std::vector<std::uint32_t> ns(a.n_max);
  std::iota(ns.begin(), ns.end(), 1U);

  auto res = metrics::check_hypothesis1(base, ns, rule);
  fmt::print("{:>4} {:>10} {:>20} {:>8}\n", "n", "gamma_n", "integral", "> n=1");
  for (const auto& row : res.rows) {
    fmt::print("{:>4} {:>10.6f} {:>20.12f} {:>8}\n", row.n, rule.gamma_for(row.n), row.integral,
               row.n == 1 ? "-" : (row.exceeds_single_router ? "yes" : "no"));
  }
  fmt::print("verdict: {}\n", res.verdict ? "strictly increasing" : "not strictly increasing");
  bool ok = res.verdict;

  if (a.simulate) {
    std::optional<std::filesystem::path> file;
    if (!a.config.empty()) file = a.config;
    auto cfg = scenario::load_config(2, file);
    auto series = scenario::run_monitor_sweep(cfg);
    auto growth = metrics::monitor_growth_check(series, cfg.monitor.duration_s);
    fmt::print("{:>8} {:>20}\n", "routers", "integral sqrt(M)");
    for (const auto& [n, v] : growth.integrals) fmt::print("{:>8} {:>20.6f}\n", n, v);
    fmt::print("monitored growth: {}\n", growth.verdict ? "non-decreasing" : "decreasing somewhere");
    ok = ok && growth.verdict;
  }
  return ok ? kOk : kTargetFailure;
}

int cmd_capture_dump(const std::string& path) {
  auto file = dataplane::read_capture_file(path);
  const auto& h = file.header;
  fmt::print("format_version {} iface {} channel {} ap_mac {} run_seed {}\n", h.format_version, h.iface, h.channel,
             h.ap_mac, h.run_seed);
  fmt::print("{:>14} {:>12} {:>5} {:>5} {:>6} {:>5} {:<18} {:<10} {}\n", "sim_time_us", "id", "src", "dst", "size",
             "proto", "class", "tag", "verdict");
  for (const auto& r : file.records) {
    fmt::print("{:>14} {:>12} {:>5} {:>5} {:>6} {:>5} {:<18} {:<10} {}\n", r.sim_time_us, r.id, r.src.index,
               r.dst.index, r.size, to_string(r.protocol), r.cls.to_string(), r.tag.name(), r.verdict.to_string());
  }
  fmt::print("{} records\n", file.records.size());
  return kOk;
}

int cmd_compare(const std::string& dir, const std::string& targets, std::optional<std::uint64_t> seed) {
  auto t = scenario::CalibrationTargets::load(targets);
  return print_report(scenario::compare_tables(scenario::load_summaries(dir, seed), t));
}

int cmd_config(int scenario, const std::string& config, const std::vector<std::string>& sets) {
  if (config.empty() && sets.empty()) {
    std::cout << scenario::default_config_text(scenario);
    return kOk;
  }
  std::optional<std::filesystem::path> file;
  if (!config.empty()) file = config;
  auto cfg = scenario::load_config(scenario, file, sets);
  std::cout << cfg.canonical << "\n";
  fmt::print("digest {}\n", cfg.digest);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of an SDN network with chained security functions"};
  app.require_subcommand(1);

  RunArgs run;
  run.out = default_out_dir();
  auto* run_cmd = app.add_subcommand("run", "Run every configuration of a scenario and write result files");
  run_cmd->add_option("--scenario", run.scenario, "Scenario id")->required()->check(CLI::Range(1, 6));
  run_cmd->add_option("--config", run.config, "Configuration file merged over the built-in defaults")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Run seed");
  run_cmd->add_option("--out", run.out, "Output folder (default: $VNFSDN_OUT_DIR or ./results)");
  run_cmd->add_option("--format", run.format, "csv or records")->check(CLI::IsMember({"csv", "records"}));
  run_cmd->add_option("--set", run.sets, "Override key.path=value; repeatable");
  run_cmd->add_option("--targets", run.targets, "Compare against a targets file after the run")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--threads", run.threads, "Concurrent runs (0 = all cores)");
  run_cmd->add_flag("--quiet", run.quiet, "Do not print the summary table");

  HypothesisArgs hyp;
  auto* hyp_cmd = app.add_subcommand("verify-hypothesis1", "Integral of the router security model for n = 1..K");
  hyp_cmd->add_option("--n-max", hyp.n_max, "Largest router count K");
  hyp_cmd->add_option("--gamma", hyp.gamma, "Oscillation amplitude coefficient");
  hyp_cmd->add_option("--gamma-rule", hyp.gamma_rule, "scaled (gamma * sqrt(n)) or fixed");
  hyp_cmd->add_option("--a-n", hyp.a_n, "Coefficient applied for n > 1");
  hyp_cmd->add_option("--m", hyp.m, "Angular frequency factor");
  hyp_cmd->add_option("--horizon", hyp.horizon, "Integration horizon in seconds");
  hyp_cmd->add_flag("--simulate", hyp.simulate, "Also run the monitored-traffic growth sweep");
  hyp_cmd->add_option("--config", hyp.config, "Scenario 2 configuration file for --simulate")
      ->check(CLI::ExistingFile);

  auto* cap_cmd = app.add_subcommand("capture", "Capture file utilities");
  cap_cmd->require_subcommand(1);
  std::string dump_path;
  auto* dump_cmd = cap_cmd->add_subcommand("dump", "Validate and list a capture file");
  dump_cmd->add_option("file", dump_path, "Capture file")->required();

  std::string result_dir;
  std::string targets_file;
  std::optional<std::uint64_t> compare_seed;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare run summaries against calibration targets");
  cmp_cmd->add_option("--result", result_dir, "Folder holding s<N>_summary_<seed> files")->required();
  cmp_cmd->add_option("--targets", targets_file, "Targets file")->required();
  cmp_cmd->add_option("--seed", compare_seed, "Seed to pick when a folder holds several");

  int cfg_scenario = 1;
  std::string cfg_file;
  std::vector<std::string> cfg_sets;
  auto* cfg_cmd = app.add_subcommand("config", "Print the defaults or the merged configuration of a scenario");
  cfg_cmd->add_option("--scenario", cfg_scenario, "Scenario id")->required()->check(CLI::Range(1, 6));
  cfg_cmd->add_option("--config", cfg_file, "Configuration file")->check(CLI::ExistingFile);
  cfg_cmd->add_option("--set", cfg_sets, "Override key.path=value; repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*hyp_cmd) return cmd_hypothesis(hyp);
    if (*dump_cmd) return cmd_capture_dump(dump_path);
    if (*cmp_cmd) return cmd_compare(result_dir, targets_file, compare_seed);
    if (*cfg_cmd) return cmd_config(cfg_scenario, cfg_file, cfg_sets);
  } catch (const CLI::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  } catch (const scenario::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kConfigError;
  } catch (const scenario::TargetsError& e) {
    fmt::print(stderr, "targets error: {}\n", e.what());
    return kConfigError;
  } catch (const scenario::MissingMetric& e) {
    fmt::print(stderr, "missing metric: {}\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid argument: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRuntimeError;
  }
  return kRuntimeError;
}
