#include "vnfsdn/model/topology.hpp"

#include <algorithm>
#include <queue>

namespace vnfsdn {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::DisconnectedGraph: return "DisconnectedGraph";
    case Violation::DuplicateController: return "DuplicateController";
    case Violation::MissingController: return "MissingController";
    case Violation::InvalidLink: return "InvalidLink";
    case Violation::Empty: return "Empty";
  }
  return "?";
}

TopologySpec TopologySpec::star(std::uint32_t hosts, std::uint32_t switches, std::uint32_t servers) {
  TopologySpec s;
  s.shape = Shape::Star;
  s.hosts = hosts;
  s.switches = switches;
  s.servers = servers;
  return s;
}

TopologySpec TopologySpec::tree(std::uint32_t routers, std::uint32_t hosts_per_router) {
  TopologySpec s;
  s.shape = Shape::Tree;
  s.routers = routers;
  s.hosts = routers * hosts_per_router;
  return s;
}

std::vector<Violation> validate(std::span<const NodeKind> nodes, std::span<const Link> links) {
  std::vector<Violation> out;
  if (nodes.empty()) {
    out.push_back(Violation::Empty);
    return out;
  }
  auto controllers = std::count(nodes.begin(), nodes.end(), NodeKind::ControllerNode);
  if (controllers > 1) out.push_back(Violation::DuplicateController);
  if (controllers == 0) out.push_back(Violation::MissingController);

  bool bad_link = false;
  std::vector<std::vector<std::uint32_t>> adj(nodes.size());
  for (const auto& l : links) {
    if (l.a.index >= nodes.size() || l.b.index >= nodes.size() || l.a == l.b || l.latency_us == 0 ||
        l.bandwidth_bps == 0 || l.queue_capacity == 0) {
      bad_link = true;
      continue;
    }
    adj[l.a.index].push_back(l.b.index);
    adj[l.b.index].push_back(l.a.index);
  }
  if (bad_link) out.push_back(Violation::InvalidLink);

  std::vector<bool> seen(nodes.size(), false);
  std::queue<std::uint32_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    auto n = q.front();
    q.pop();
    for (auto m : adj[n]) {
      if (!seen[m]) {
        seen[m] = true;
        ++reached;
        q.push(m);
      }
    }
  }
  if (reached != nodes.size()) out.push_back(Violation::DisconnectedGraph);
  return out;
}

std::vector<Violation> validate(const Topology& t) { return validate(t.nodes(), t.links()); }

Topology::Topology(std::vector<NodeKind> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  auto violations = validate(nodes_, links_);
  if (!violations.empty()) {
    throw TopologyError(violations.front(), "invalid topology: " + std::string(to_string(violations.front())));
  }
  adjacency_.resize(nodes_.size());
  for (std::uint32_t i = 0; i < links_.size(); ++i) {
    adjacency_[links_[i].a.index].push_back({links_[i].b, i});
    adjacency_[links_[i].b.index].push_back({links_[i].a, i});
  }
}

std::optional<std::uint32_t> Topology::link_between(NodeId a, NodeId b) const {
  std::optional<std::uint32_t> best;
  for (const auto& adj : adjacency_.at(a.index)) {
    if (adj.node != b) continue;
    if (!best || links_[adj.link].latency_us < links_[*best].latency_us) best = adj.link;
  }
  return best;
}

std::vector<NodeId> Topology::nodes_of(NodeKind k) const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == k) out.push_back(NodeId{i});
  }
  return out;
}

NodeId Topology::controller() const { return nodes_of(NodeKind::ControllerNode).front(); }

std::optional<NodeId> Topology::vnf_host() const {
  auto v = nodes_of(NodeKind::VnfHost);
  if (v.empty()) return std::nullopt;
  return v.front();
}

bool Topology::operator==(const Topology& o) const {
  if (nodes_ != o.nodes_ || links_.size() != o.links_.size()) return false;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& x = links_[i];
    const auto& y = o.links_[i];
    if (x.a != y.a || x.b != y.b || x.latency_us != y.latency_us || x.bandwidth_bps != y.bandwidth_bps ||
        x.queue_capacity != y.queue_capacity) {
      return false;
    }
  }
  return true;
}

namespace {

Link make_link(std::uint32_t a, std::uint32_t b, const LinkParams& p) {
  return Link{NodeId{a}, NodeId{b}, p.latency_us, p.bandwidth_bps, p.queue_capacity};
}

}  // namespace

Topology build_topology(const TopologySpec& spec) {
  std::vector<NodeKind> nodes;
  std::vector<Link> links;

  if (spec.shape == TopologySpec::Shape::Custom) {
    nodes = spec.nodes;
    for (const auto& l : spec.links) links.push_back(make_link(l.a, l.b, l.params));
    return Topology(std::move(nodes), std::move(links));
  }

  if (spec.hosts == 0) throw TopologyError(Violation::Empty, "topology needs at least one host");
  if (spec.switches != 1) throw TopologyError(Violation::InvalidLink, "star and tree shapes use exactly one switch");
  if (spec.servers == 0) throw TopologyError(Violation::Empty, "topology needs at least one server");
  bool tree = spec.shape == TopologySpec::Shape::Tree;
  if (tree && (spec.routers == 0 || spec.hosts % spec.routers != 0)) {
    throw TopologyError(Violation::InvalidLink, "tree shape needs hosts divisible across routers");
  }

  const std::uint32_t routers = tree ? spec.routers : 0;
  const std::uint32_t first_router = spec.hosts;
  const std::uint32_t sw = first_router + routers;
  const std::uint32_t first_server = sw + 1;
  const std::uint32_t vnf = first_server + spec.servers;
  const std::uint32_t ctrl = vnf + (spec.vnf_host ? 1 : 0);

  nodes.assign(spec.hosts, NodeKind::UeHost);
  nodes.insert(nodes.end(), routers, NodeKind::Router);
  nodes.push_back(NodeKind::Switch);
  nodes.insert(nodes.end(), spec.servers, NodeKind::Server);
  if (spec.vnf_host) nodes.push_back(NodeKind::VnfHost);
  nodes.push_back(NodeKind::ControllerNode);

  for (std::uint32_t h = 0; h < spec.hosts; ++h) {
    LinkParams p = spec.host_link;
    if (spec.hosts > 1) p.latency_us += spec.host_latency_spread_us * h / (spec.hosts - 1);
    std::uint32_t upstream = tree ? first_router + h / (spec.hosts / routers) : sw;
    links.push_back(make_link(h, upstream, p));
  }
  for (std::uint32_t r = 0; r < routers; ++r) links.push_back(make_link(first_router + r, sw, spec.router_link));
  for (std::uint32_t s = 0; s < spec.servers; ++s) links.push_back(make_link(sw, first_server + s, spec.server_link));
  if (spec.vnf_host) links.push_back(make_link(sw, vnf, spec.vnf_link));
  links.push_back(make_link(sw, ctrl, spec.controller_link));

  return Topology(std::move(nodes), std::move(links));
}

}  // namespace vnfsdn
