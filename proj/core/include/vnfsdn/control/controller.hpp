#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnfsdn/dataplane/vnf.hpp"
#include "vnfsdn/model/topology.hpp"
#include "vnfsdn/model/types.hpp"

namespace vnfsdn::control {

using Path = std::vector<NodeId>;

class NoPath : public std::runtime_error {
 public:
  NoPath(NodeId a, NodeId b)
      : std::runtime_error("no path from node " + std::to_string(a.index) + " to node " + std::to_string(b.index)) {}
};

/// (src, dst, tag) identifies a flow; the tag is the class discriminator the
/// controller can observe.
struct FlowKey {
  NodeId src;
  NodeId dst;
  std::uint32_t discriminator = 0;

  auto operator<=>(const FlowKey&) const = default;
  static FlowKey of(const Packet& p) { return FlowKey{p.src, p.dst, p.tag.id()}; }
};

struct FlowRule {
  enum class Action : std::uint8_t { ForwardVia, Drop };

  FlowKey key;
  Action action = Action::Drop;
  Path path;  // ForwardVia only
  int priority = 0;
  SimTime installed_at;
  std::uint64_t idle_timeout_us = 0;
  SimTime last_hit;

  bool active_at(SimTime t) const { return installed_at <= t && t.us < last_hit.us + idle_timeout_us; }
};

struct LookupResult {
  enum class Kind : std::uint8_t { Drop, ForwardVia, SendToChain };
  Kind kind = Kind::SendToChain;
  Path path;
};

struct Reroute {
  NodeId src;
  NodeId dst;
  Path before;
  Path after;
};

struct ControllerConfig {
  double congestion_threshold = 0.8;  // queue-occupancy fraction in (0, 1]
  double congestion_penalty = 10.0;
  std::uint64_t drop_idle_timeout_us = 30'000'000;
  std::uint64_t rule_install_latency_us = 1'000;
  int drop_priority = 100;
  int route_priority = 10;
  // false: Block verdicts act on the single packet only, no drop rule.
  bool block_whole_flow = true;
};

/// Minimum total-latency path whose interior nodes are switches or routers.
/// Ties resolve to the path with the smallest next NodeId at every hop.
/// link_cost overrides Link::latency_us when non-empty (one entry per link).
Path compute_route(const Topology& t, NodeId src, NodeId dst, std::span<const std::uint64_t> link_cost = {});

/// Sum of link latencies along a path (throws if two consecutive nodes are not adjacent).
std::uint64_t path_latency(const Topology& t, const Path& p);

class Controller {
 public:
  Controller(const Topology& topology, ControllerConfig config);

  const ControllerConfig& config() const { return config_; }
  const Topology& topology() const { return *topology_; }

  Path compute_route(NodeId src, NodeId dst) const;
  /// Cached route for (src, dst), computed on first use.
  const Path& route(NodeId src, NodeId dst);

  /// Block installs a Drop rule on the packet's flow (unless per-packet mode);
  /// Forward changes nothing.
  std::optional<FlowRule> on_verdict(const Packet& p, const dataplane::Verdict& v, SimTime t);

  /// Penalizes a congested link and moves cached routes off it when an
  /// alternative exists.
  std::vector<Reroute> handle_congestion(std::uint32_t link, double occupancy);

  /// Highest-priority active rule wins; ACL entries count as Drop at the
  /// top priority. No match sends the packet to the chain.
  LookupResult lookup(const Packet& p, SimTime t);

  void install(FlowRule rule);
  /// Static deny entry matched at ingress ahead of the flow table.
  void add_acl(const dataplane::FirewallVnf::Rule& rule) { acl_.push_back(rule); }
  const std::vector<dataplane::FirewallVnf::Rule>& acl() const { return acl_; }

  /// Removes rules whose idle timeout has elapsed; returns how many.
  std::size_t expire(SimTime t);
  std::size_t rule_count() const;
  std::size_t active_rule_count(SimTime t) const;
  /// Rules stored for a key, highest priority first.
  std::vector<FlowRule> rules_for(const FlowKey& key) const;

 private:
  const Topology* topology_;
  ControllerConfig config_;
  std::vector<std::uint64_t> link_cost_;
  std::map<std::pair<NodeId, NodeId>, Path> routes_;
  std::map<FlowKey, std::map<int, FlowRule, std::greater<>>> rules_;
  std::vector<dataplane::FirewallVnf::Rule> acl_;
};

}  // namespace vnfsdn::control
