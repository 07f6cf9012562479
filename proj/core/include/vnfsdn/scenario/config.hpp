#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfsdn/control/controller.hpp"
#include "vnfsdn/dataplane/capture.hpp"
#include "vnfsdn/dataplane/vnf.hpp"
#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/model/topology.hpp"
#include "vnfsdn/traffic/traffic.hpp"

namespace vnfsdn::scenario {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario id of the file disagrees with the requested one, or a config name
/// is not available for the scenario.
class ConfigMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

inline constexpr int kScenarioCount = 6;

/// Symbolic node reference such as "host:3" or "server:0".
struct NodeRef {
  NodeKind kind = NodeKind::UeHost;
  std::uint32_t index = 0;

  static NodeRef parse(const std::string& s);
  NodeId resolve(const Topology& t) const;
  std::string to_string() const;
};

struct DdosSpec {
  // "all_except_target", "count:N" (first N hosts other than the target) or "list:1,2,5"
  std::string attackers = "all_except_target";
  NodeRef target;
  double rate_multiplier = 50.0;
  double base_rate_pps = 0.0;  // 0 = the benign per-host rate
  ThreatKind kind = ThreatKind::SynFlood;
  double start_s = 0.0;
  double stop_s = 0.0;
  std::string tag = "attack";
  traffic::SizeDist size = traffic::SizeDist::fixed(1000);

  std::vector<NodeId> resolve_attackers(const Topology& t) const;
};

struct AccessSpec {
  double authorized_pps = 0.0;
  double unauthorized_pps = 0.0;
  NodeRef target{NodeKind::Server, 0};
  std::string authorized_tag = "benign";
  std::string unauthorized_tag = "intruder";
  traffic::SizeDist size = traffic::SizeDist::fixed(128);
};

struct CaptureSettings {
  bool enabled = false;
  std::uint32_t channel = 6;
  std::string ap_mac = "02:00:00:00:00:01";
  std::string iface = "sim0";
  std::uint64_t cost_us = dataplane::kDefaultCaptureCostUs;
};

struct SecuritySettings {
  std::vector<std::string> policy{"benign"};
  dataplane::FilterVnf filter;
  dataplane::FirewallVnf firewall;
  dataplane::IdsVnf ids;
  std::map<std::string, dataplane::MitigationProfile> profiles;
  CaptureSettings capture;
  double base_mb_per_vnf = 32.0;
};

struct MetricsSettings {
  double window_s = 1.0;
  double rto_ms = 200.0;
  double downtime_threshold_pct = 95.0;
  double kb_per_rule = 0.5;
  metrics::ClassWeights weights;
};

struct AnalyticSettings {
  double a_n = 1.0;
  double gamma = 0.1;
  metrics::GammaRule::Mode gamma_rule = metrics::GammaRule::Mode::ScaledBySqrtN;
  double m = 1.0;
  double horizon_s = 20.0;
  std::uint32_t n_max = 16;
};

struct SweepSettings {
  std::uint32_t ue_from = 10;
  std::uint32_t ue_to = 100;
  std::uint32_t ue_step = 10;
};

struct MonitorSettings {
  std::vector<std::uint32_t> routers{1, 2, 4};
  std::uint32_t hosts_per_router = 4;
  double interval_ms = 100.0;
  double duration_s = 10.0;
};

struct ScenarioConfig {
  int scenario = 1;
  std::uint64_t seed = 1;
  double duration_s = 120.0;
  double drain_s = 2.0;
  std::vector<std::string> configs;

  TopologySpec topology;
  traffic::BenignProfile benign;
  std::vector<DdosSpec> ddos;
  AccessSpec access;
  SecuritySettings security;
  control::ControllerConfig controller;
  bool reroute_on_congestion = true;
  std::uint32_t chain_queue_capacity = 1000;
  std::uint64_t server_delay_us = 100;
  MetricsSettings metrics;
  AnalyticSettings analytic;
  SweepSettings sweep;
  MonitorSettings monitor;

  std::string canonical;  // merged configuration tree, compact form
  std::string digest;     // 16 hex digits of the canonical tree hash

  /// Throws ConfigError when a value is out of range.
  void check() const;
};

/// Built-in defaults for a scenario as a pretty-printed key/value tree.
std::string default_config_text(int scenario);

/// Defaults, then the file (if any) merged over them, then `key.path=value`
/// overrides. Unknown keys are rejected. A "scenario" key in the file must
/// match the requested scenario.
ScenarioConfig load_config(int scenario, const std::optional<std::filesystem::path>& file = std::nullopt,
                           const std::vector<std::string>& overrides = {});

/// Configuration names understood by the runner.
const std::vector<std::string>& known_security_configs();

}  // namespace vnfsdn::scenario
