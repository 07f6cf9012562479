#include "vnfsdn/scenario/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "vnfsdn/sim/rng.hpp"

namespace vnfsdn::scenario {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kBaseDefaults = R"({
  "scenario": 1,
  "seed": 1,
  "duration_s": 120,
  "drain_s": 2,
  "configs": [],
  "topology": {
    "shape": "star",
    "hosts": 10,
    "switches": 1,
    "servers": 1,
    "routers": 0,
    "vnf_host": false,
    "host_latency_spread_us": 0,
    "host_link": {"latency_us": 1000, "bandwidth_bps": 100000000, "queue_capacity": 100},
    "server_link": {"latency_us": 1000, "bandwidth_bps": 100000000, "queue_capacity": 100},
    "controller_link": {"latency_us": 200, "bandwidth_bps": 1000000000, "queue_capacity": 1000},
    "router_link": {"latency_us": 1000, "bandwidth_bps": 1000000000, "queue_capacity": 200},
    "vnf_link": {"latency_us": 200, "bandwidth_bps": 1000000000, "queue_capacity": 1000}
  },
  "traffic": {
    "benign": {
      "rate_pps": 20,
      "size": {"dist": "uniform", "lo": 200, "hi": 1400},
      "tag": "benign",
      "protocol": "tcp",
      "request_response": true,
      "response_size": {"dist": "uniform", "lo": 200, "hi": 1400},
      "server_share": 1.0
    },
    "ddos": [],
    "access": {
      "authorized_pps": 0,
      "unauthorized_pps": 0,
      "target": "server:0",
      "authorized_tag": "benign",
      "unauthorized_tag": "intruder",
      "size": {"dist": "fixed", "lo": 128, "hi": 128}
    }
  },
  "security": {
    "policy": ["benign"],
    "filter": {"cost_us": 2, "memory_kb_per_flow": 1.0},
    "firewall": {
      "rules": [{"protocol": "icmp", "action": "deny"}],
      "default": "allow",
      "offload_deny_rules": true,
      "cost_us": 1,
      "memory_kb_per_flow": 0.5
    },
    "ids": {
      "signatures": ["SynFlood", "UdpFlood", "IcmpFlood", "PortScan"],
      "anomaly_window_s": 1.0,
      "anomaly_threshold_pps": 5000,
      "cost_us": 5,
      "memory_kb_per_flow": 4.0
    },
    "profiles": {
      "qos_sdn": {"detection_probability": 0.0, "detection_delay_us": 0, "cost_us": 3,
                  "memory_kb_per_flow": 2.0, "prioritize_benign": true},
      "net_virt": {"detection_probability": 0.6, "detection_delay_us": 2000000, "cost_us": 4,
                   "memory_kb_per_flow": 3.0, "prioritize_benign": false},
      "mobile_edge": {"detection_probability": 0.5, "detection_delay_us": 3000000, "cost_us": 3,
                      "memory_kb_per_flow": 2.5, "prioritize_benign": false}
    },
    "capture": {"enabled": false, "channel": 6, "ap_mac": "02:00:00:00:00:01", "iface": "sim0", "cost_us": 1},
    "base_mb_per_vnf": 32
  },
  "controller": {
    "congestion_threshold": 0.8,
    "congestion_penalty": 10,
    "drop_idle_timeout_s": 30,
    "rule_install_latency_us": 1000,
    "drop_priority": 100,
    "route_priority": 10,
    "block_whole_flow": true,
    "reroute_on_congestion": true
  },
  "chain": {"queue_capacity": 1000},
  "server": {"delay_us": 100},
  "metrics": {
    "window_s": 1,
    "rto_ms": 200,
    "downtime_threshold_pct": 95,
    "kb_per_rule": 0.5,
    "weights": {"benign": 1.0, "threat": 2.0, "unauthorized": 2.0}
  },
  "analytic": {"a_n": 1.0, "gamma": 0.1, "gamma_rule": "scaled", "m": 1.0, "horizon_s": 20, "n_max": 16},
  "sweep": {"ue_from": 10, "ue_to": 100, "ue_step": 10},
  "monitor": {"routers": [1, 2, 4], "hosts_per_router": 4, "interval_ms": 100, "duration_s": 10}
})";

// Per-scenario patches merged over the base tree.
constexpr const char* kScenarioPatch[kScenarioCount] = {
    // 1: security measures against a mixed SYN/ICMP flood on the server
    R"({
  "scenario": 1,
  "duration_s": 120,
  "configs": ["no_security", "firewall_only", "ids_only", "vnfsdn", "vnfsdn_firewall"],
  "topology": {
    "server_link": {"latency_us": 1000, "bandwidth_bps": 71500000, "queue_capacity": 100},
    "controller_link": {"latency_us": 200, "bandwidth_bps": 95500000, "queue_capacity": 100}
  },
  "traffic": {
    "benign": {"rate_pps": 156, "size": {"dist": "uniform", "lo": 200, "hi": 1400}},
    "ddos": [
      {"attackers": "count:5", "target": "server:0", "rate_multiplier": 12.7, "base_rate_pps": 0,
       "kind": "SynFlood", "start_s": 10, "stop_s": 110, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}},
      {"attackers": "count:5", "target": "server:0", "rate_multiplier": 0.36, "base_rate_pps": 0,
       "kind": "IcmpFlood", "start_s": 10, "stop_s": 110, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}}
    ]
  },
  "controller": {"block_whole_flow": false}
})",
    // 2: scalability sweep over the number of user equipments
    R"({
  "scenario": 2,
  "duration_s": 20,
  "configs": ["no_security", "vnfsdn", "vnfsdn_firewall"],
  "topology": {"host_link": {"latency_us": 1000, "bandwidth_bps": 20000000, "queue_capacity": 100}},
  "traffic": {
    "ddos": [
      {"attackers": "count:5", "target": "host:0", "rate_multiplier": 50, "base_rate_pps": 0,
       "kind": "SynFlood", "start_s": 2, "stop_s": 18, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}}
    ]
  }
})",
    // 3: response time over time for three approaches
    R"({
  "scenario": 3,
  "duration_s": 60,
  "configs": ["vnfsdn", "ids_only", "qos_sdn"],
  "topology": {"host_link": {"latency_us": 1000, "bandwidth_bps": 20000000, "queue_capacity": 100}},
  "traffic": {
    "ddos": [
      {"attackers": "all_except_target", "target": "host:0", "rate_multiplier": 50, "base_rate_pps": 0,
       "kind": "SynFlood", "start_s": 5, "stop_s": 55, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}}
    ]
  }
})",
    // 4: high-traffic network, twenty hosts, with and without the filter
    R"({
  "scenario": 4,
  "duration_s": 30,
  "drain_s": 1,
  "configs": ["no_security", "vnfsdn"],
  "topology": {
    "hosts": 20,
    "host_link": {"latency_us": 2600, "bandwidth_bps": 100000000, "queue_capacity": 100},
    "server_link": {"latency_us": 13600, "bandwidth_bps": 240000000, "queue_capacity": 324},
    "controller_link": {"latency_us": 200, "bandwidth_bps": 1000000000, "queue_capacity": 1000}
  },
  "traffic": {
    "benign": {"rate_pps": 1250, "size": {"dist": "uniform", "lo": 1000, "hi": 1500},
               "request_response": false, "server_share": 0.84},
    "ddos": [
      {"attackers": "count:4", "target": "server:0", "rate_multiplier": 2.1, "base_rate_pps": 0,
       "kind": "UdpFlood", "start_s": 0, "stop_s": 30, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1250, "hi": 1250}}
    ]
  }
})",
    // 5: DDoS on one user equipment
    R"({
  "scenario": 5,
  "duration_s": 120,
  "configs": ["no_security", "vnfsdn", "ids_only", "net_virt", "mobile_edge", "qos_sdn"],
  "topology": {"host_link": {"latency_us": 1000, "bandwidth_bps": 10000000, "queue_capacity": 100}},
  "traffic": {
    "benign": {"server_share": 0.6},
    "ddos": [
      {"attackers": "all_except_target", "target": "host:0", "rate_multiplier": 50, "base_rate_pps": 0,
       "kind": "SynFlood", "start_s": 10, "stop_s": 110, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}}
    ],
    "access": {"authorized_pps": 5, "unauthorized_pps": 5}
  }
})",
    // 6: threat detection rate over a fixed period
    R"({
  "scenario": 6,
  "duration_s": 60,
  "configs": ["no_security", "vnfsdn", "vnfsdn_firewall", "ids_only", "firewall_only"],
  "topology": {"host_link": {"latency_us": 1000, "bandwidth_bps": 20000000, "queue_capacity": 100}},
  "traffic": {
    "ddos": [
      {"attackers": "count:3", "target": "host:0", "rate_multiplier": 30, "base_rate_pps": 0,
       "kind": "SynFlood", "start_s": 5, "stop_s": 55, "tag": "attack",
       "size": {"dist": "fixed", "lo": 1000, "hi": 1000}},
      {"attackers": "list:4,5", "target": "server:0", "rate_multiplier": 20, "base_rate_pps": 0,
       "kind": "IcmpFlood", "start_s": 15, "stop_s": 45, "tag": "probe",
       "size": {"dist": "fixed", "lo": 512, "hi": 512}}
    ],
    "access": {"authorized_pps": 2, "unauthorized_pps": 2}
  }
})",
};

json base_tree(int scenario) {
  if (scenario < 1 || scenario > kScenarioCount) throw ConfigError(fmt::format("scenario must be 1..{}", kScenarioCount));
  json tree = json::parse(kBaseDefaults);
  json patch = json::parse(kScenarioPatch[scenario - 1]);
  tree.merge_patch(patch);
  return tree;
}

// Every key of `tree` must exist in `schema`; arrays are replaced wholesale.
void check_keys(const json& tree, const json& schema, const std::string& where) {
  if (!tree.is_object() || !schema.is_object()) return;
  for (const auto& [k, v] : tree.items()) {
    if (!schema.contains(k)) throw ConfigError(fmt::format("unknown configuration key '{}{}'", where, k));
    if (k == "profiles") continue;  // user-defined names
    check_keys(v, schema.at(k), where + k + ".");
  }
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

void apply_override(json& tree, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  std::string path = assignment.substr(0, eq);
  json* node = &tree;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(p);
      } catch (const std::exception&) {
        throw ConfigError("array index expected in override path: " + path);
      }
      if (idx >= node->size()) throw ConfigError("array index out of range in override path: " + path);
      node = &(*node)[idx];
      continue;
    }
    if (!node->is_object() || (!node->contains(p) && !(i > 0 && parts[i - 1] == "profiles"))) {
      throw ConfigError("unknown configuration key in override: " + path);
    }
    node = &(*node)[p];
  }
  *node = parse_value(assignment.substr(eq + 1));
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(fmt::format("missing configuration key '{}{}'", where, key));
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad value for '{}{}': {}", where, key, e.what()));
  }
}

LinkParams parse_link(const json& j, const std::string& where) {
  LinkParams p;
  p.latency_us = get<std::uint64_t>(j, "latency_us", where);
  p.bandwidth_bps = get<std::uint64_t>(j, "bandwidth_bps", where);
  p.queue_capacity = get<std::uint32_t>(j, "queue_capacity", where);
  return p;
}

traffic::SizeDist parse_size(const json& j, const std::string& where) {
  auto dist = get<std::string>(j, "dist", where);
  auto lo = get<std::uint32_t>(j, "lo", where);
  auto hi = get<std::uint32_t>(j, "hi", where);
  traffic::SizeDist d;
  if (dist == "fixed") {
    d = traffic::SizeDist::fixed(lo);
  } else if (dist == "uniform") {
    d = traffic::SizeDist::uniform(lo, hi);
  } else {
    throw ConfigError(fmt::format("{}dist must be fixed or uniform", where));
  }
  try {
    d.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + e.what());
  }
  return d;
}

template <class F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ScenarioConfig from_tree(const json& t) {
  ScenarioConfig c;
  c.scenario = get<int>(t, "scenario", "");
  c.seed = get<std::uint64_t>(t, "seed", "");
  c.duration_s = get<double>(t, "duration_s", "");
  c.drain_s = get<double>(t, "drain_s", "");
  c.configs = get<std::vector<std::string>>(t, "configs", "");

  const auto& tp = t.at("topology");
  auto shape = get<std::string>(tp, "shape", "topology.");
  if (shape == "star") {
    c.topology.shape = TopologySpec::Shape::Star;
  } else if (shape == "tree") {
    c.topology.shape = TopologySpec::Shape::Tree;
  } else {
    throw ConfigError("topology.shape must be star or tree");
  }
  c.topology.hosts = get<std::uint32_t>(tp, "hosts", "topology.");
  c.topology.switches = get<std::uint32_t>(tp, "switches", "topology.");
  c.topology.servers = get<std::uint32_t>(tp, "servers", "topology.");
  c.topology.routers = get<std::uint32_t>(tp, "routers", "topology.");
  c.topology.vnf_host = get<bool>(tp, "vnf_host", "topology.");
  c.topology.host_latency_spread_us = get<std::uint64_t>(tp, "host_latency_spread_us", "topology.");
  c.topology.host_link = parse_link(tp.at("host_link"), "topology.host_link.");
  c.topology.server_link = parse_link(tp.at("server_link"), "topology.server_link.");
  c.topology.controller_link = parse_link(tp.at("controller_link"), "topology.controller_link.");
  c.topology.router_link = parse_link(tp.at("router_link"), "topology.router_link.");
  c.topology.vnf_link = parse_link(tp.at("vnf_link"), "topology.vnf_link.");

  const auto& tr = t.at("traffic");
  const auto& b = tr.at("benign");
  c.benign.rate_pps = get<double>(b, "rate_pps", "traffic.benign.");
  c.benign.size = parse_size(b.at("size"), "traffic.benign.size.");
  c.benign.tag = get<std::string>(b, "tag", "traffic.benign.");
  c.benign.protocol = wrap("traffic.benign.protocol", [&] { return parse_protocol(get<std::string>(b, "protocol", "")); });
  c.benign.request_response = get<bool>(b, "request_response", "traffic.benign.");
  c.benign.response_size = parse_size(b.at("response_size"), "traffic.benign.response_size.");
  c.benign.server_share = get<double>(b, "server_share", "traffic.benign.");

  std::size_t i = 0;
  for (const auto& d : tr.at("ddos")) {
    auto where = fmt::format("traffic.ddos.{}.", i++);
    check_keys(d, json::parse(R"({"attackers":0,"target":0,"rate_multiplier":0,"base_rate_pps":0,"kind":0,
        "start_s":0,"stop_s":0,"tag":0,"size":{"dist":0,"lo":0,"hi":0}})"), where);
    DdosSpec s;
    s.attackers = get<std::string>(d, "attackers", where);
    s.target = wrap(where + "target", [&] { return NodeRef::parse(get<std::string>(d, "target", where)); });
    s.rate_multiplier = get<double>(d, "rate_multiplier", where);
    s.base_rate_pps = get<double>(d, "base_rate_pps", where);
    s.kind = wrap(where + "kind", [&] { return parse_threat_kind(get<std::string>(d, "kind", where)); });
    s.start_s = get<double>(d, "start_s", where);
    s.stop_s = get<double>(d, "stop_s", where);
    s.tag = get<std::string>(d, "tag", where);
    s.size = parse_size(d.at("size"), where + "size.");
    c.ddos.push_back(std::move(s));
  }

  const auto& a = tr.at("access");
  c.access.authorized_pps = get<double>(a, "authorized_pps", "traffic.access.");
  c.access.unauthorized_pps = get<double>(a, "unauthorized_pps", "traffic.access.");
  c.access.target = wrap("traffic.access.target", [&] { return NodeRef::parse(get<std::string>(a, "target", "")); });
  c.access.authorized_tag = get<std::string>(a, "authorized_tag", "traffic.access.");
  c.access.unauthorized_tag = get<std::string>(a, "unauthorized_tag", "traffic.access.");
  c.access.size = parse_size(a.at("size"), "traffic.access.size.");

  const auto& s = t.at("security");
  c.security.policy = get<std::vector<std::string>>(s, "policy", "security.");
  c.security.filter.cost_us_per_packet = get<std::uint64_t>(s.at("filter"), "cost_us", "security.filter.");
  c.security.filter.memory_kb_per_flow = get<double>(s.at("filter"), "memory_kb_per_flow", "security.filter.");

  const auto& fw = s.at("firewall");
  i = 0;
  for (const auto& r : fw.at("rules")) {
    auto where = fmt::format("security.firewall.rules.{}.", i++);
    check_keys(r, json::parse(R"({"src":0,"dst":0,"protocol":0,"action":0})"), where);
    dataplane::FirewallVnf::Rule rule;
    if (r.contains("src")) rule.src = NodeId{get<std::uint32_t>(r, "src", where)};
    if (r.contains("dst")) rule.dst = NodeId{get<std::uint32_t>(r, "dst", where)};
    if (r.contains("protocol")) {
      rule.protocol = wrap(where + "protocol", [&] { return parse_protocol(get<std::string>(r, "protocol", where)); });
    }
    auto action = get<std::string>(r, "action", where);
    if (action != "allow" && action != "deny") throw ConfigError(where + "action must be allow or deny");
    rule.action = action == "allow" ? dataplane::FirewallVnf::Action::Allow : dataplane::FirewallVnf::Action::Deny;
    c.security.firewall.rules.push_back(rule);
  }
  auto def = get<std::string>(fw, "default", "security.firewall.");
  if (def != "allow" && def != "deny") throw ConfigError("security.firewall.default must be allow or deny");
  c.security.firewall.default_action =
      def == "allow" ? dataplane::FirewallVnf::Action::Allow : dataplane::FirewallVnf::Action::Deny;
  c.security.firewall.offload_deny_rules = get<bool>(fw, "offload_deny_rules", "security.firewall.");
  c.security.firewall.cost_us_per_packet = get<std::uint64_t>(fw, "cost_us", "security.firewall.");
  c.security.firewall.memory_kb_per_flow = get<double>(fw, "memory_kb_per_flow", "security.firewall.");

  const auto& ids = s.at("ids");
  for (const auto& k : get<std::vector<std::string>>(ids, "signatures", "security.ids.")) {
    c.security.ids.signatures.insert(wrap("security.ids.signatures", [&] { return parse_threat_kind(k); }));
  }
  c.security.ids.anomaly_window_us = SimTime::from_seconds(get<double>(ids, "anomaly_window_s", "security.ids.")).us;
  c.security.ids.anomaly_threshold_pps = get<double>(ids, "anomaly_threshold_pps", "security.ids.");
  c.security.ids.cost_us_per_packet = get<std::uint64_t>(ids, "cost_us", "security.ids.");
  c.security.ids.memory_kb_per_flow = get<double>(ids, "memory_kb_per_flow", "security.ids.");

  for (const auto& [name, p] : s.at("profiles").items()) {
    auto where = "security.profiles." + name + ".";
    check_keys(p, json::parse(R"({"detection_probability":0,"detection_delay_us":0,"cost_us":0,
        "memory_kb_per_flow":0,"prioritize_benign":0})"), where);
    dataplane::MitigationProfile m;
    m.name = name;
    m.detection_probability = get<double>(p, "detection_probability", where);
    m.detection_delay_us = get<std::uint64_t>(p, "detection_delay_us", where);
    m.cost_us_per_packet = get<std::uint64_t>(p, "cost_us", where);
    m.memory_kb_per_flow = get<double>(p, "memory_kb_per_flow", where);
    m.prioritize_benign = get<bool>(p, "prioritize_benign", where);
    wrap(where, [&] {
      m.check();
      return 0;
    });
    c.security.profiles.emplace(name, std::move(m));
  }

  const auto& cap = s.at("capture");
  c.security.capture.enabled = get<bool>(cap, "enabled", "security.capture.");
  c.security.capture.channel = get<std::uint32_t>(cap, "channel", "security.capture.");
  c.security.capture.ap_mac = get<std::string>(cap, "ap_mac", "security.capture.");
  c.security.capture.iface = get<std::string>(cap, "iface", "security.capture.");
  c.security.capture.cost_us = get<std::uint64_t>(cap, "cost_us", "security.capture.");
  c.security.base_mb_per_vnf = get<double>(s, "base_mb_per_vnf", "security.");

  const auto& ct = t.at("controller");
  c.controller.congestion_threshold = get<double>(ct, "congestion_threshold", "controller.");
  c.controller.congestion_penalty = get<double>(ct, "congestion_penalty", "controller.");
  c.controller.drop_idle_timeout_us = SimTime::from_seconds(get<double>(ct, "drop_idle_timeout_s", "controller.")).us;
  c.controller.rule_install_latency_us = get<std::uint64_t>(ct, "rule_install_latency_us", "controller.");
  c.controller.drop_priority = get<int>(ct, "drop_priority", "controller.");
  c.controller.route_priority = get<int>(ct, "route_priority", "controller.");
  c.controller.block_whole_flow = get<bool>(ct, "block_whole_flow", "controller.");
  c.reroute_on_congestion = get<bool>(ct, "reroute_on_congestion", "controller.");
  c.chain_queue_capacity = get<std::uint32_t>(t.at("chain"), "queue_capacity", "chain.");
  c.server_delay_us = get<std::uint64_t>(t.at("server"), "delay_us", "server.");

  const auto& m = t.at("metrics");
  c.metrics.window_s = get<double>(m, "window_s", "metrics.");
  c.metrics.rto_ms = get<double>(m, "rto_ms", "metrics.");
  c.metrics.downtime_threshold_pct = get<double>(m, "downtime_threshold_pct", "metrics.");
  c.metrics.kb_per_rule = get<double>(m, "kb_per_rule", "metrics.");
  c.metrics.weights.benign = get<double>(m.at("weights"), "benign", "metrics.weights.");
  c.metrics.weights.threat = get<double>(m.at("weights"), "threat", "metrics.weights.");
  c.metrics.weights.unauthorized = get<double>(m.at("weights"), "unauthorized", "metrics.weights.");

  const auto& an = t.at("analytic");
  c.analytic.a_n = get<double>(an, "a_n", "analytic.");
  c.analytic.gamma = get<double>(an, "gamma", "analytic.");
  auto rule = get<std::string>(an, "gamma_rule", "analytic.");
  if (rule == "fixed") {
    c.analytic.gamma_rule = metrics::GammaRule::Mode::Fixed;
  } else if (rule == "scaled") {
    c.analytic.gamma_rule = metrics::GammaRule::Mode::ScaledBySqrtN;
  } else {
    throw ConfigError("analytic.gamma_rule must be fixed or scaled");
  }
  c.analytic.m = get<double>(an, "m", "analytic.");
  c.analytic.horizon_s = get<double>(an, "horizon_s", "analytic.");
  c.analytic.n_max = get<std::uint32_t>(an, "n_max", "analytic.");

  const auto& sw = t.at("sweep");
  c.sweep.ue_from = get<std::uint32_t>(sw, "ue_from", "sweep.");
  c.sweep.ue_to = get<std::uint32_t>(sw, "ue_to", "sweep.");
  c.sweep.ue_step = get<std::uint32_t>(sw, "ue_step", "sweep.");

  const auto& mo = t.at("monitor");
  c.monitor.routers = get<std::vector<std::uint32_t>>(mo, "routers", "monitor.");
  c.monitor.hosts_per_router = get<std::uint32_t>(mo, "hosts_per_router", "monitor.");
  c.monitor.interval_ms = get<double>(mo, "interval_ms", "monitor.");
  c.monitor.duration_s = get<double>(mo, "duration_s", "monitor.");
  return c;
}

}  // namespace

NodeRef NodeRef::parse(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("node reference must look like kind:index: " + s);
  auto kind = s.substr(0, colon);
  NodeRef r;
  if (kind == "host") {
    r.kind = NodeKind::UeHost;
  } else if (kind == "server") {
    r.kind = NodeKind::Server;
  } else if (kind == "router") {
    r.kind = NodeKind::Router;
  } else if (kind == "switch") {
    r.kind = NodeKind::Switch;
  } else {
    throw std::invalid_argument("unknown node kind in reference: " + s);
  }
  try {
    r.index = static_cast<std::uint32_t>(std::stoul(s.substr(colon + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad node index in reference: " + s);
  }
  return r;
}

NodeId NodeRef::resolve(const Topology& t) const {
  auto nodes = t.nodes_of(kind);
  if (index >= nodes.size()) throw ConfigError("node reference does not exist in the topology: " + to_string());
  return nodes[index];
}

std::string NodeRef::to_string() const {
  const char* k = kind == NodeKind::UeHost   ? "host"
                  : kind == NodeKind::Server ? "server"
                  : kind == NodeKind::Router ? "router"
                                             : "switch";
  return fmt::format("{}:{}", k, index);
}

std::vector<NodeId> DdosSpec::resolve_attackers(const Topology& t) const {
  NodeId tgt = target.resolve(t);
  auto hosts = t.nodes_of(NodeKind::UeHost);
  std::erase(hosts, tgt);
  if (attackers == "all_except_target") return hosts;
  if (attackers.starts_with("count:")) {
    std::size_t n = 0;
    try {
      n = std::stoul(attackers.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("bad attacker count: " + attackers);
    }
    if (n > hosts.size()) throw ConfigError("attacker count exceeds the available hosts: " + attackers);
    hosts.resize(n);
    return hosts;
  }
  if (attackers.starts_with("list:")) {
    std::vector<NodeId> out;
    std::stringstream ss(attackers.substr(5));
    std::string item;
    auto all = t.nodes_of(NodeKind::UeHost);
    while (std::getline(ss, item, ',')) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(item);
      } catch (const std::exception&) {
        throw ConfigError("bad attacker list: " + attackers);
      }
      if (idx >= all.size() || all[idx] == tgt) throw ConfigError("attacker list names an invalid host: " + attackers);
      out.push_back(all[idx]);
    }
    return out;
  }
  throw ConfigError("attackers must be all_except_target, count:N or list:i,j: " + attackers);
}

const std::vector<std::string>& known_security_configs() {
  static const std::vector<std::string> names{"no_security", "firewall_only", "ids_only",   "vnfsdn",
                                              "vnfsdn_firewall", "qos_sdn",    "net_virt", "mobile_edge"};
  return names;
}

void ScenarioConfig::check() const {
  if (scenario < 1 || scenario > kScenarioCount) throw ConfigError("scenario must be 1..6");
  if (!(duration_s > 0.0)) throw ConfigError("duration_s must be positive");
  if (!(drain_s >= 0.0)) throw ConfigError("drain_s must be non-negative");
  if (!(metrics.window_s > 0.0)) throw ConfigError("metrics.window_s must be positive");
  if (SimTime::from_seconds(duration_s).us < SimTime::from_seconds(metrics.window_s).us) {
    throw ConfigError("duration_s must cover at least one window");
  }
  if (configs.empty()) throw ConfigError("configs must name at least one security configuration");
  for (const auto& name : configs) {
    bool builtin = name == "no_security" || name == "firewall_only" || name == "ids_only" || name == "vnfsdn" ||
                   name == "vnfsdn_firewall";
    if (!builtin && !security.profiles.contains(name)) throw ConfigMismatch("unknown security configuration: " + name);
  }
  if (security.policy.empty()) throw ConfigError("security.policy must not be empty");
  try {
    benign.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("traffic.benign: ") + e.what());
  }
  if (!(controller.congestion_threshold > 0.0 && controller.congestion_threshold <= 1.0)) {
    throw ConfigError("controller.congestion_threshold must lie in (0, 1]");
  }
  for (const auto& d : ddos) {
    if (!(d.start_s < d.stop_s)) throw ConfigError("ddos start_s must precede stop_s");
    if (!(d.rate_multiplier >= 0.0) || !(d.base_rate_pps >= 0.0)) throw ConfigError("ddos rates must be >= 0");
  }
  if (!(access.authorized_pps >= 0.0) || !(access.unauthorized_pps >= 0.0)) {
    throw ConfigError("access rates must be >= 0");
  }
  if (!dataplane::is_colon_hex_mac(security.capture.ap_mac)) throw ConfigError("security.capture.ap_mac is not a MAC");
  if (sweep.ue_step == 0 || sweep.ue_from == 0 || sweep.ue_from > sweep.ue_to) throw ConfigError("bad UE sweep range");
  if (monitor.routers.size() < 3 || !(monitor.interval_ms > 0.0)) throw ConfigError("monitor needs >= 3 router counts");
}

std::string default_config_text(int scenario) { return base_tree(scenario).dump(2) + "\n"; }

ScenarioConfig load_config(int scenario, const std::optional<std::filesystem::path>& file,
                           const std::vector<std::string>& overrides) {
  json schema = base_tree(scenario);
  json tree = schema;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file: " + file->string());
    json user;
    try {
      user = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file is not valid: " + std::string(e.what()));
    }
    if (!user.is_object()) throw ConfigError("config file must hold an object");
    if (user.contains("scenario") && user.at("scenario") != json(scenario)) {
      throw ConfigMismatch(fmt::format("config file is for scenario {}, requested {}", user.at("scenario").dump(), scenario));
    }
    check_keys(user, schema, "");
    tree.merge_patch(user);
  }
  for (const auto& o : overrides) apply_override(tree, o);
  check_keys(tree, schema, "");
  if (tree.at("scenario") != json(scenario)) throw ConfigMismatch("the scenario key cannot be overridden");

  ScenarioConfig c = from_tree(tree);
  c.canonical = tree.dump();
  c.digest = fmt::format("{:016x}", sim::fnv1a64(c.canonical));
  c.check();
  return c;
}

}  // namespace vnfsdn::scenario
