#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfsdn/model/types.hpp"

namespace vnfsdn {

struct LinkParams {
  std::uint64_t latency_us = 1000;
  std::uint64_t bandwidth_bps = 100'000'000;
  std::uint32_t queue_capacity = 100;  // packets
};

/// Bidirectional link; each direction is an independent output port.
struct Link {
  NodeId a;
  NodeId b;
  std::uint64_t latency_us = 0;
  std::uint64_t bandwidth_bps = 0;
  std::uint32_t queue_capacity = 0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

enum class Violation : std::uint8_t { DisconnectedGraph, DuplicateController, MissingController, InvalidLink, Empty };

std::string_view to_string(Violation v);

class TopologyError : public std::runtime_error {
 public:
  TopologyError(Violation v, const std::string& what) : std::runtime_error(what), violation_(v) {}
  Violation violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Descriptor accepted by build_topology. Node ids follow declaration order:
/// hosts, routers, switches, servers, vnf host, controller.
struct TopologySpec {
  enum class Shape : std::uint8_t { Star, Tree, Custom };

  struct LinkDecl {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    LinkParams params;
  };

  Shape shape = Shape::Star;
  std::uint32_t hosts = 10;
  std::uint32_t switches = 1;
  std::uint32_t servers = 1;
  // Tree shape: hosts are split evenly across this many access routers.
  std::uint32_t routers = 0;
  bool vnf_host = false;

  LinkParams host_link;
  LinkParams server_link;
  LinkParams controller_link;
  LinkParams router_link;
  LinkParams vnf_link;
  // Host i gets host_link.latency_us + spread * i / (hosts - 1).
  std::uint64_t host_latency_spread_us = 0;

  // Custom shape only.
  std::vector<NodeKind> nodes;
  std::vector<LinkDecl> links;

  static TopologySpec star(std::uint32_t hosts, std::uint32_t switches = 1, std::uint32_t servers = 1);
  static TopologySpec tree(std::uint32_t routers, std::uint32_t hosts_per_router);
};

class Topology {
 public:
  struct Adjacent {
    NodeId node;
    std::uint32_t link;
  };

  /// Validates and throws TopologyError on the first violation.
  Topology(std::vector<NodeKind> nodes, std::vector<Link> links);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  NodeKind kind(NodeId n) const { return nodes_.at(n.index); }
  const std::vector<NodeKind>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(std::uint32_t i) const { return links_.at(i); }
  std::span<const Adjacent> neighbors(NodeId n) const { return adjacency_.at(n.index); }
  // lowest-latency link when a and b are joined more than once
  std::optional<std::uint32_t> link_between(NodeId a, NodeId b) const;

  std::vector<NodeId> nodes_of(NodeKind k) const;
  NodeId controller() const;
  std::optional<NodeId> vnf_host() const;

  bool operator==(const Topology& o) const;

 private:
  std::vector<NodeKind> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

/// Empty iff every topology invariant holds.
std::vector<Violation> validate(std::span<const NodeKind> nodes, std::span<const Link> links);
std::vector<Violation> validate(const Topology& t);

Topology build_topology(const TopologySpec& spec);

}  // namespace vnfsdn
