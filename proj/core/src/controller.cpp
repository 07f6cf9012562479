#include "vnfsdn/control/controller.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace vnfsdn::control {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

bool can_transit(NodeKind k) { return k == NodeKind::Switch || k == NodeKind::Router; }

}  // namespace

Path compute_route(const Topology& t, NodeId src, NodeId dst, std::span<const std::uint64_t> link_cost) {
  if (src.index >= t.node_count() || dst.index >= t.node_count()) throw std::out_of_range("route endpoint");
  if (src == dst) throw std::invalid_argument("route needs distinct endpoints");
  auto cost = [&](std::uint32_t link) { return link_cost.empty() ? t.link(link).latency_us : link_cost[link]; };

  // distances to dst, relaxing only through transit-capable nodes
  std::vector<std::uint64_t> dist(t.node_count(), kInf);
  using Item = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[dst.index] = 0;
  pq.push({0, dst.index});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    if (u != dst.index && !can_transit(t.kind(NodeId{u}))) continue;
    for (const auto& adj : t.neighbors(NodeId{u})) {
      std::uint64_t nd = d + cost(adj.link);
      if (nd < dist[adj.node.index]) {
        dist[adj.node.index] = nd;
        pq.push({nd, adj.node.index});
      }
    }
  }
  if (dist[src.index] == kInf) throw NoPath(src, dst);

  Path path{src};
  NodeId cur = src;
  while (cur != dst) {
    std::optional<NodeId> next;
    for (const auto& adj : t.neighbors(cur)) {
      NodeId v = adj.node;
      if (dist[v.index] == kInf || dist[v.index] + cost(adj.link) != dist[cur.index]) continue;
      if (v != dst && !can_transit(t.kind(v))) continue;
      if (!next || v < *next) next = v;
    }
    if (!next) throw NoPath(src, dst);
    cur = *next;
    path.push_back(cur);
  }
  return path;
}

std::uint64_t path_latency(const Topology& t, const Path& p) {
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    auto l = t.link_between(p[i - 1], p[i]);
    if (!l) throw std::invalid_argument("path hop without a link");
    total += t.link(*l).latency_us;
  }
  return total;
}

Controller::Controller(const Topology& topology, ControllerConfig config)
    : topology_(&topology), config_(config) {
  if (!(config_.congestion_threshold > 0.0 && config_.congestion_threshold <= 1.0)) {
    throw std::invalid_argument("congestion threshold must lie in (0, 1]");
  }
  link_cost_.reserve(topology.link_count());
  for (const auto& l : topology.links()) link_cost_.push_back(l.latency_us);
}

Path Controller::compute_route(NodeId src, NodeId dst) const {
  return control::compute_route(*topology_, src, dst, link_cost_);
}

const Path& Controller::route(NodeId src, NodeId dst) {
  auto key = std::make_pair(src, dst);
  auto it = routes_.find(key);
  if (it == routes_.end()) it = routes_.emplace(key, compute_route(src, dst)).first;
  return it->second;
}

std::optional<FlowRule> Controller::on_verdict(const Packet& p, const dataplane::Verdict& v, SimTime t) {
  if (!v.is_block() || !config_.block_whole_flow) return std::nullopt;
  FlowRule rule;
  rule.key = FlowKey::of(p);
  rule.action = FlowRule::Action::Drop;
  rule.priority = config_.drop_priority;
  rule.installed_at = t + config_.rule_install_latency_us;
  rule.last_hit = rule.installed_at;
  rule.idle_timeout_us = config_.drop_idle_timeout_us;
  install(rule);
  return rule;
}

void Controller::install(FlowRule rule) {
  auto& slot = rules_[rule.key];
  auto it = slot.find(rule.priority);
  // an already-active rule for the same (key, priority) is kept and refreshed
  if (it != slot.end() && it->second.installed_at <= rule.installed_at &&
      rule.installed_at.us < it->second.last_hit.us + it->second.idle_timeout_us) {
    it->second.last_hit = std::max(it->second.last_hit, rule.installed_at);
    return;
  }
  slot.insert_or_assign(rule.priority, std::move(rule));
}

std::vector<Reroute> Controller::handle_congestion(std::uint32_t link, double occupancy) {
  std::vector<Reroute> out;
  if (!(occupancy >= 0.0 && occupancy <= 1.0)) throw std::invalid_argument("occupancy must lie in [0, 1]");
  if (occupancy <= config_.congestion_threshold) return out;

  auto penalized = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(topology_->link(link).latency_us) * config_.congestion_penalty));
  if (link_cost_.at(link) >= penalized) return out;
  link_cost_[link] = penalized;

  const auto& l = topology_->link(link);
  for (auto& [key, path] : routes_) {
    bool uses = false;
    for (std::size_t i = 1; i < path.size() && !uses; ++i) {
      uses = (path[i - 1] == l.a && path[i] == l.b) || (path[i - 1] == l.b && path[i] == l.a);
    }
    if (!uses) continue;
    Path fresh = compute_route(key.first, key.second);
    if (fresh != path) {
      out.push_back(Reroute{key.first, key.second, path, fresh});
      path = std::move(fresh);
    }
  }
  return out;
}

LookupResult Controller::lookup(const Packet& p, SimTime t) {
  for (const auto& entry : acl_) {
    if (entry.action == dataplane::FirewallVnf::Action::Deny && entry.matches(p)) {
      return LookupResult{LookupResult::Kind::Drop, {}};
    }
  }
  auto it = rules_.find(FlowKey::of(p));
  if (it == rules_.end()) return {};
  for (auto& [prio, rule] : it->second) {
    if (!rule.active_at(t)) continue;
    rule.last_hit = t;
    if (rule.action == FlowRule::Action::Drop) return LookupResult{LookupResult::Kind::Drop, {}};
    return LookupResult{LookupResult::Kind::ForwardVia, rule.path};
  }
  return {};
}

std::size_t Controller::expire(SimTime t) {
  std::size_t removed = 0;
  for (auto it = rules_.begin(); it != rules_.end();) {
    auto& slot = it->second;
    for (auto r = slot.begin(); r != slot.end();) {
      if (t.us >= r->second.last_hit.us + r->second.idle_timeout_us) {
        r = slot.erase(r);
        ++removed;
      } else {
        ++r;
      }
    }
    it = slot.empty() ? rules_.erase(it) : std::next(it);
  }
  return removed;
}

std::size_t Controller::rule_count() const {
  std::size_t n = 0;
  for (const auto& [k, slot] : rules_) n += slot.size();
  return n;
}

std::size_t Controller::active_rule_count(SimTime t) const {
  std::size_t n = 0;
  for (const auto& [k, slot] : rules_) {
    for (const auto& [prio, r] : slot) n += r.active_at(t) ? 1 : 0;
  }
  return n;
}

std::vector<FlowRule> Controller::rules_for(const FlowKey& key) const {
  std::vector<FlowRule> out;
  auto it = rules_.find(key);
  if (it != rules_.end()) {
    for (const auto& [prio, r] : it->second) out.push_back(r);
  }
  return out;
}

}  // namespace vnfsdn::control
