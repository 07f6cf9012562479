#include "vnfsdn/scenario/runner.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <thread>

namespace vnfsdn::scenario {

namespace {

std::shared_ptr<const SecurityPolicy> make_policy(const ScenarioConfig& cfg) {
  auto p = std::make_shared<SecurityPolicy>();
  for (const auto& t : cfg.security.policy) p->accepted_tags.insert(SecurityTag(t));
  return p;
}

metrics::KpiSettings kpi_settings(const ScenarioConfig& cfg, const Topology& topo, const Deployment& d) {
  metrics::KpiSettings k;
  k.window_us = SimTime::from_seconds(cfg.metrics.window_s).us;
  k.windows = static_cast<std::uint32_t>(SimTime::from_seconds(cfg.duration_s).us / k.window_us);
  k.rto_us = SimTime::from_ms(cfg.metrics.rto_ms).us;
  k.downtime_threshold_pct = cfg.metrics.downtime_threshold_pct;
  k.devices_total = topo.nodes_of(NodeKind::UeHost).size() + topo.nodes_of(NodeKind::Server).size();
  k.base_mb = d.base_mb;
  k.kb_per_flow = d.kb_per_flow;
  k.kb_per_rule = cfg.metrics.kb_per_rule;
  return k;
}

void add_traffic(traffic::TrafficGenerator& gen, const ScenarioConfig& cfg, const Topology& topo) {
  auto hosts = topo.nodes_of(NodeKind::UeHost);
  auto servers = topo.nodes_of(NodeKind::Server);
  for (auto h : hosts) gen.add_benign(cfg.benign, h, servers, hosts);

  for (const auto& d : cfg.ddos) {
    traffic::DdosProfile p;
    p.attackers = d.resolve_attackers(topo);
    p.target = d.target.resolve(topo);
    p.rate_multiplier = d.rate_multiplier;
    p.base_rate_pps = d.base_rate_pps > 0.0 ? d.base_rate_pps : cfg.benign.rate_pps;
    p.kind = d.kind;
    p.start = SimTime::from_seconds(d.start_s);
    p.stop = SimTime::from_seconds(d.stop_s);
    p.tag = d.tag;
    p.size = d.size;
    gen.add_ddos(p);
  }

  if (cfg.access.authorized_pps > 0.0 || cfg.access.unauthorized_pps > 0.0) {
    traffic::AccessProfile a;
    a.authorized_pps = cfg.access.authorized_pps;
    a.unauthorized_pps = cfg.access.unauthorized_pps;
    a.sources = hosts;
    a.target = cfg.access.target.resolve(topo);
    a.authorized_tag = cfg.access.authorized_tag;
    a.unauthorized_tag = cfg.access.unauthorized_tag;
    a.size = cfg.access.size;
    gen.add_access(a);
  }
}

// Interns every configured tag in a fixed order before runs start.
void intern_tags(const ScenarioConfig& cfg) {
  (void)SecurityTag(cfg.benign.tag);
  for (const auto& d : cfg.ddos) (void)SecurityTag(d.tag);
  (void)SecurityTag(cfg.access.authorized_tag);
  (void)SecurityTag(cfg.access.unauthorized_tag);
  for (const auto& t : cfg.security.policy) (void)SecurityTag(t);
}

}  // namespace

SecurityMode mode_of(const std::string& config) {
  if (config == "no_security") return SecurityMode::NoSecurity;
  if (config == "firewall_only") return SecurityMode::FirewallOnly;
  if (config == "ids_only") return SecurityMode::IdsOnly;
  if (config == "vnfsdn") return SecurityMode::Vnfsdn;
  if (config == "vnfsdn_firewall") return SecurityMode::VnfsdnPlusFirewall;
  return SecurityMode::Profile;
}

Deployment deploy(const ScenarioConfig& cfg, const std::string& config, sim::RngStream* profile_rng) {
  Deployment d;
  d.mode = mode_of(config);
  auto policy = make_policy(cfg);
  auto account = [&](const dataplane::Vnf& v) {
    d.base_mb += cfg.security.base_mb_per_vnf;
    d.kb_per_flow += dataplane::memory_kb_per_flow(v);
  };
  auto add = [&](dataplane::Vnf v) {
    account(v);
    d.chain.vnfs.push_back(std::move(v));
  };
  auto add_filter = [&] {
    auto f = cfg.security.filter;
    f.policy = policy;
    add(std::move(f));
  };
  auto add_firewall = [&] {
    const auto& fw = cfg.security.firewall;
    if (!fw.offload_deny_rules) {
      add(fw);
      return;
    }
    for (const auto& r : fw.rules) {
      if (r.action == dataplane::FirewallVnf::Action::Deny) d.acl.push_back(r);
    }
    // A deny-only rule set with default allow is enforced entirely by the ingress ACL.
    bool deny_only = fw.default_action == dataplane::FirewallVnf::Action::Allow &&
                     std::all_of(fw.rules.begin(), fw.rules.end(),
                                 [](const auto& r) { return r.action == dataplane::FirewallVnf::Action::Deny; });
    if (deny_only) {
      account(fw);
    } else {
      add(fw);
    }
  };

  switch (d.mode) {
    case SecurityMode::NoSecurity:
      break;
    case SecurityMode::FirewallOnly:
      add_firewall();
      break;
    case SecurityMode::IdsOnly:
      add(cfg.security.ids);
      break;
    case SecurityMode::Vnfsdn:
      add_filter();
      break;
    case SecurityMode::VnfsdnPlusFirewall:
      add_filter();
      add_firewall();
      break;
    case SecurityMode::Profile: {
      auto it = cfg.security.profiles.find(config);
      if (it == cfg.security.profiles.end()) throw ConfigMismatch("unknown security configuration: " + config);
      if (!profile_rng) throw std::invalid_argument("profile configurations need a random stream");
      dataplane::ProfileVnf v;
      v.profile = it->second;
      v.rng = profile_rng;
      d.priority_queues = it->second.prioritize_benign;
      add(std::move(v));
      break;
    }
  }
  return d;
}

RunResult run_single(const ScenarioConfig& cfg, const std::string& config, const RunOptions& opts) {
  Topology topo = build_topology(cfg.topology);
  sim::Engine engine;
  sim::RngRegistry rng(cfg.seed);
  sim::RngStream* profile_rng = mode_of(config) == SecurityMode::Profile ? &rng.register_stream("profile") : nullptr;
  Deployment d = deploy(cfg, config, profile_rng);

  NetworkOptions no;
  no.controller = cfg.controller;
  no.reroute_on_congestion = cfg.reroute_on_congestion;
  no.chain_queue_capacity = cfg.chain_queue_capacity;
  no.priority_queues = d.priority_queues;
  no.priority_policy = make_policy(cfg);
  no.response_size = cfg.benign.response_size;
  no.server_delay_us = cfg.server_delay_us;
  no.keep_trace = opts.keep_trace;
  no.weights = cfg.metrics.weights;
  if (cfg.security.capture.enabled && !d.chain.empty()) {
    dataplane::CaptureVnf c;
    c.channel = cfg.security.capture.channel;
    c.ap_mac = cfg.security.capture.ap_mac;
    c.iface = cfg.security.capture.iface;
    c.folder = opts.capture_dir / ("s" + std::to_string(cfg.scenario) + "_" + config + "_" +
                                   std::to_string(cfg.topology.hosts) + "ue");
    c.run_seed = cfg.seed;
    c.cost_us_per_packet = cfg.security.capture.cost_us;
    no.capture = std::move(c);
  }

  auto kpi = kpi_settings(cfg, topo, d);
  Network net(topo, std::move(d.chain), std::move(no), engine, kpi);
  for (const auto& r : d.acl) net.add_acl(r);
  if (opts.observer) net.observe(opts.observer);

  SimTime stop = SimTime::from_seconds(cfg.duration_s);
  traffic::TrafficGenerator gen(engine, rng, stop, [&net](Packet p) { net.inject(std::move(p)); });
  net.attach(gen);
  add_traffic(gen, cfg, topo);

  engine.run_until(stop + SimTime::from_seconds(cfg.drain_s).us);

  RunResult r;
  r.config = config;
  r.mode = d.mode;
  r.ues = cfg.topology.hosts;
  r.capture_file = net.save_capture();
  r.report = net.report();
  r.stats = net.stats();
  r.emitted = gen.counts();
  r.events = engine.processed_total();
  r.chain_presented = net.chain_presented();
  if (opts.keep_trace) r.trace = net.trace();
  return r;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.check();
  intern_tags(cfg);

  std::vector<ScenarioConfig> variants;
  if (cfg.scenario == 2) {
    for (auto n = cfg.sweep.ue_from; n <= cfg.sweep.ue_to; n += cfg.sweep.ue_step) {
      auto v = cfg;
      v.topology.hosts = n;
      variants.push_back(std::move(v));
    }
  } else {
    variants.push_back(cfg);
  }

  struct Job {
    const ScenarioConfig* cfg;
    std::string config;
  };
  std::vector<Job> jobs;
  for (const auto& v : variants) {
    for (const auto& c : cfg.configs) jobs.push_back({&v, c});
  }

  ScenarioResult out;
  out.scenario = cfg.scenario;
  out.seed = cfg.seed;
  out.digest = cfg.digest;
  out.runs.resize(jobs.size());

  unsigned threads = opts.max_threads ? opts.max_threads : std::max(1U, std::thread::hardware_concurrency());
  if (opts.observer) threads = 1;
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) out.runs[i] = run_single(*jobs[i].cfg, jobs[i].config, opts);
    return out;
  }
  std::vector<std::future<RunResult>> pending;
  std::size_t next = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (pending.size() - next >= threads) {
      out.runs[next] = pending[next].get();
      ++next;
    }
    pending.push_back(std::async(std::launch::async, [&, i] { return run_single(*jobs[i].cfg, jobs[i].config, opts); }));
  }
  for (; next < pending.size(); ++next) out.runs[next] = pending[next].get();
  return out;
}

std::vector<metrics::MonitorSeries> run_monitor_sweep(const ScenarioConfig& cfg) {
  intern_tags(cfg);
  std::vector<metrics::MonitorSeries> out;
  for (auto routers : cfg.monitor.routers) {
    auto spec = TopologySpec::tree(routers, cfg.monitor.hosts_per_router);
    spec.host_link = cfg.topology.host_link;
    spec.server_link = cfg.topology.server_link;
    spec.controller_link = cfg.topology.controller_link;
    spec.router_link = cfg.topology.router_link;
    Topology topo = build_topology(spec);

    sim::Engine engine;
    sim::RngRegistry rng(cfg.seed);
    NetworkOptions no;
    no.controller = cfg.controller;
    no.response_size = cfg.benign.response_size;
    no.server_delay_us = cfg.server_delay_us;
    no.weights = cfg.metrics.weights;
    no.monitor_points = topo.nodes_of(NodeKind::Router);
    no.monitor_interval_us = SimTime::from_ms(cfg.monitor.interval_ms).us;

    metrics::KpiSettings k;
    k.window_us = SimTime::from_seconds(cfg.metrics.window_s).us;
    k.windows = static_cast<std::uint32_t>(SimTime::from_seconds(cfg.monitor.duration_s).us / k.window_us);
    Network net(topo, {}, std::move(no), engine, k);

    SimTime stop = SimTime::from_seconds(cfg.monitor.duration_s);
    traffic::TrafficGenerator gen(engine, rng, stop, [&net](Packet p) { net.inject(std::move(p)); });
    net.attach(gen);
    auto hosts = topo.nodes_of(NodeKind::UeHost);
    auto servers = topo.nodes_of(NodeKind::Server);
    for (auto h : hosts) gen.add_benign(cfg.benign, h, servers, hosts);
    if (cfg.access.authorized_pps > 0.0 || cfg.access.unauthorized_pps > 0.0) {
      traffic::AccessProfile a;
      a.authorized_pps = cfg.access.authorized_pps;
      a.unauthorized_pps = cfg.access.unauthorized_pps;
      a.sources = hosts;
      a.target = servers.front();
      a.authorized_tag = cfg.access.authorized_tag;
      a.unauthorized_tag = cfg.access.unauthorized_tag;
      a.size = cfg.access.size;
      gen.add_access(a);
    }
    engine.run_until(stop);
    out.push_back({routers, net.monitor_samples()});
  }
  return out;
}

}  // namespace vnfsdn::scenario
