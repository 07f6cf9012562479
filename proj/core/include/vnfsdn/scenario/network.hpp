#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vnfsdn/control/controller.hpp"
#include "vnfsdn/dataplane/capture.hpp"
#include "vnfsdn/dataplane/vnf.hpp"
#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/metrics/kpi.hpp"
#include "vnfsdn/model/topology.hpp"
#include "vnfsdn/sim/engine.hpp"
#include "vnfsdn/sim/rng.hpp"
#include "vnfsdn/traffic/traffic.hpp"

namespace vnfsdn::scenario {

enum class SecurityMode : std::uint8_t { NoSecurity, FirewallOnly, IdsOnly, Vnfsdn, VnfsdnPlusFirewall, Profile };

std::string_view to_string(SecurityMode m);

struct NetworkOptions {
  control::ControllerConfig controller;
  bool reroute_on_congestion = false;
  std::uint32_t chain_queue_capacity = 1000;
  // strict two-class priority on every port; high class = tags the policy accepts
  bool priority_queues = false;
  std::shared_ptr<const SecurityPolicy> priority_policy;
  traffic::SizeDist response_size = traffic::SizeDist::uniform(200, 1400);
  std::uint64_t server_delay_us = 100;
  bool keep_trace = false;

  std::optional<dataplane::CaptureVnf> capture;  // attached to the chain node when set

  std::vector<NodeId> monitor_points;
  std::uint64_t monitor_interval_us = 0;
  metrics::ClassWeights weights;
};

/// Counts of what happened to emitted packets, for conservation checks.
struct FlowStats {
  std::uint64_t emitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t blocked = 0;
  std::uint64_t queue_dropped = 0;
  std::uint64_t in_flight = 0;
};

/// One simulated network: output ports with drop-tail queues, the ingress
/// lookup against the controller, steering through the VNF chain and
/// request/response handling. Traffic enters through inject().
class Network {
 public:
  Network(const Topology& topology, dataplane::VnfChain chain, NetworkOptions options, sim::Engine& engine,
          metrics::KpiSettings kpi);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  void attach(traffic::TrafficGenerator& generator) { generator_ = &generator; }
  /// Emits a packet at its source at the engine's current time.
  void inject(Packet p);

  /// Deny entries pushed to the ingress ahead of the flow table.
  void add_acl(const dataplane::FirewallVnf::Rule& r) { controller_.add_acl(r); }
  /// Called for every trace record in production order.
  void observe(std::function<void(const metrics::TraceRecord&)> f) { observer_ = std::move(f); }

  control::Controller& controller() { return controller_; }
  const Topology& topology() const { return topology_; }
  NodeId chain_node() const { return chain_node_; }
  const dataplane::VnfChain& chain() const { return chain_; }

  FlowStats stats() const;
  const std::vector<metrics::TraceRecord>& trace() const { return trace_; }
  metrics::KpiReport report() const { return kpi_.finish(); }
  const std::vector<metrics::MonitorSample>& monitor_samples() const { return monitor_; }
  std::uint64_t chain_presented() const { return chain_presented_; }

  /// Stops the capture function and writes its file; nullopt without capture.
  std::optional<std::filesystem::path> save_capture();
  const std::optional<dataplane::CaptureVnf>& capture() const { return options_.capture; }

 private:
  enum class Stage : std::uint8_t { Fresh, ToChain, FromChain, Routed, Originate };

  struct Flight {
    Packet pkt;
    std::shared_ptr<const control::Path> path;
    std::uint32_t hop = 0;
    Stage stage = Stage::Fresh;
    bool high = false;
    std::uint64_t origin_us = 0;  // request creation for responses
  };

  struct Port {
    std::uint32_t link = 0;
    NodeId to;
    std::uint64_t latency_us = 0;
    std::uint64_t bandwidth_bps = 0;
    std::uint32_t capacity = 0;
    std::deque<std::uint32_t> high;
    std::deque<std::uint32_t> low;
    std::optional<std::uint32_t> serving;
    bool congested = false;
  };

  std::uint32_t alloc(Flight f);
  void release(std::uint32_t slot);
  std::shared_ptr<const control::Path> route(NodeId a, NodeId b);

  void on_arrival(const sim::Event& e);
  void on_departure(const sim::Event& e);
  void on_rule_timeout(const sim::Event& e);
  void on_monitor_sample(const sim::Event& e);

  void start_flight(std::uint32_t slot);
  void forward(std::uint32_t slot);
  void enqueue(std::uint32_t port, std::uint32_t slot);
  void start_tx(Port& p, std::uint32_t port, std::uint32_t slot);
  void enqueue_chain(std::uint32_t slot);
  void start_chain(std::uint32_t slot);
  void deliver(std::uint32_t slot);
  void drop(std::uint32_t slot, metrics::TraceKind kind, NodeId at);

  metrics::TraceRecord record(metrics::TraceKind kind, const Flight& f, NodeId at) const;
  void emit_record(const metrics::TraceRecord& r);

  const Topology& topology_;
  dataplane::VnfChain chain_;
  NetworkOptions options_;
  sim::Engine& engine_;
  control::Controller controller_;
  traffic::TrafficGenerator* generator_ = nullptr;
  NodeId chain_node_;
  std::uint64_t horizon_us_ = 0;

  std::vector<Flight> flights_;
  std::vector<std::uint32_t> free_;
  std::vector<Port> ports_;
  std::map<std::pair<NodeId, NodeId>, std::shared_ptr<const control::Path>> routes_;

  std::deque<std::uint32_t> chain_queue_;
  std::optional<std::uint32_t> chain_serving_;
  dataplane::ChainResult chain_result_;
  std::uint64_t chain_presented_ = 0;

  std::vector<control::FlowKey> rule_keys_;
  std::set<control::FlowKey> live_rules_;

  std::vector<bool> monitored_;
  std::vector<std::pair<double, double>> monitor_pending_;
  std::vector<metrics::MonitorSample> monitor_;

  metrics::KpiAccumulator kpi_;
  std::vector<metrics::TraceRecord> trace_;
  std::function<void(const metrics::TraceRecord&)> observer_;
  FlowStats stats_;
};

}  // namespace vnfsdn::scenario
