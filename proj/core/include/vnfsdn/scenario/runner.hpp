#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/metrics/kpi.hpp"
#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/network.hpp"
#include "vnfsdn/traffic/traffic.hpp"

namespace vnfsdn::scenario {

struct RunOptions {
  bool keep_trace = false;
  // Runs execute one after another when an observer is set.
  std::function<void(const metrics::TraceRecord&)> observer;
  std::filesystem::path capture_dir = ".";
  unsigned max_threads = 0;  // 0 = hardware concurrency
};

struct RunResult {
  std::string config;
  SecurityMode mode = SecurityMode::NoSecurity;
  std::uint32_t ues = 0;
  metrics::KpiReport report;
  FlowStats stats;
  traffic::EmitCounts emitted;
  std::uint64_t events = 0;
  std::uint64_t chain_presented = 0;
  std::optional<std::filesystem::path> capture_file;
  std::vector<metrics::TraceRecord> trace;  // only with RunOptions::keep_trace
};

struct ScenarioResult {
  int scenario = 0;
  std::uint64_t seed = 0;
  std::string digest;
  std::vector<RunResult> runs;  // ordered by (ues, position in the config list)
};

/// Maps a configuration name to its mode; anything not built in is a profile.
SecurityMode mode_of(const std::string& config);

/// Chain, ingress ACL and memory model for one named configuration.
struct Deployment {
  SecurityMode mode = SecurityMode::NoSecurity;
  dataplane::VnfChain chain;
  std::vector<dataplane::FirewallVnf::Rule> acl;
  bool priority_queues = false;
  double base_mb = 0.0;
  double kb_per_flow = 0.0;
};

/// `profile_rng` is required for profile configurations.
Deployment deploy(const ScenarioConfig& cfg, const std::string& config, sim::RngStream* profile_rng);

/// One configuration on the scenario workload with cfg.topology as given.
RunResult run_single(const ScenarioConfig& cfg, const std::string& config, const RunOptions& opts = {});

/// Every configuration of cfg.configs; scenario 2 also sweeps the host count.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Monitored traffic at the access routers for each router count of cfg.monitor.
std::vector<metrics::MonitorSeries> run_monitor_sweep(const ScenarioConfig& cfg);

}  // namespace vnfsdn::scenario
