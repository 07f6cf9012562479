#include "vnfsdn/scenario/network.hpp"

#include <algorithm>

namespace vnfsdn::scenario {

using metrics::TraceKind;
using metrics::TraceRecord;

std::string_view to_string(SecurityMode m) {
  switch (m) {
    case SecurityMode::NoSecurity: return "NoSecurity";
    case SecurityMode::FirewallOnly: return "FirewallOnly";
    case SecurityMode::IdsOnly: return "IdsOnly";
    case SecurityMode::Vnfsdn: return "Vnfsdn";
    case SecurityMode::VnfsdnPlusFirewall: return "VnfsdnPlusFirewall";
    case SecurityMode::Profile: return "Profile";
  }
  return "?";
}

Network::Network(const Topology& topology, dataplane::VnfChain chain, NetworkOptions options, sim::Engine& engine,
                 metrics::KpiSettings kpi)
    : topology_(topology),
      chain_(std::move(chain)),
      options_(std::move(options)),
      engine_(engine),
      controller_(topology, options_.controller),
      chain_node_(topology.vnf_host().value_or(topology.controller())),
      kpi_(kpi) {
  ports_.reserve(topology.link_count() * 2);
  for (std::uint32_t i = 0; i < topology.link_count(); ++i) {
    const auto& l = topology.link(i);
    for (NodeId to : {l.b, l.a}) {
      Port p;
      p.link = i;
      p.to = to;
      p.latency_us = l.latency_us;
      p.bandwidth_bps = l.bandwidth_bps;
      p.capacity = l.queue_capacity;
      ports_.push_back(std::move(p));
    }
  }
  monitored_.assign(topology.node_count(), false);
  for (auto n : options_.monitor_points) monitored_.at(n.index) = true;

  engine_.on(sim::EventKind::PacketArrival, [this](const sim::Event& e) { on_arrival(e); });
  engine_.on(sim::EventKind::PacketDeparture, [this](const sim::Event& e) { on_departure(e); });
  engine_.on(sim::EventKind::RuleTimeout, [this](const sim::Event& e) { on_rule_timeout(e); });
  engine_.on(sim::EventKind::MonitorSample, [this](const sim::Event& e) { on_monitor_sample(e); });
  engine_.on(sim::EventKind::WindowBoundary, [this](const sim::Event&) { controller_.expire(engine_.now()); });

  horizon_us_ = kpi.window_us * kpi.windows;
  for (std::uint64_t t = kpi.window_us; t <= horizon_us_; t += kpi.window_us) {
    engine_.schedule(SimTime{t}, sim::EventKind::WindowBoundary);
  }
  if (options_.monitor_interval_us > 0) {
    engine_.schedule(SimTime{0}, sim::EventKind::MonitorSample);
  }
}

std::uint32_t Network::alloc(Flight f) {
  if (!free_.empty()) {
    auto slot = free_.back();
    free_.pop_back();
    flights_[slot] = std::move(f);
    return slot;
  }
  flights_.push_back(std::move(f));
  return static_cast<std::uint32_t>(flights_.size() - 1);
}

void Network::release(std::uint32_t slot) {
  flights_[slot].path.reset();
  free_.push_back(slot);
}

std::shared_ptr<const control::Path> Network::route(NodeId a, NodeId b) {
  auto key = std::make_pair(a, b);
  auto it = routes_.find(key);
  if (it == routes_.end()) {
    it = routes_.emplace(key, std::make_shared<const control::Path>(controller_.route(a, b))).first;
  }
  return it->second;
}

TraceRecord Network::record(TraceKind kind, const Flight& f, NodeId at) const {
  TraceRecord r;
  r.kind = kind;
  r.time_us = engine_.now().us;
  r.packet_id = f.pkt.id;
  r.created_us = f.pkt.created_at.us;
  r.origin_us = f.origin_us;
  r.src = f.pkt.src;
  r.dst = f.pkt.dst;
  r.size = f.pkt.size;
  r.tag = f.pkt.tag.id();
  r.cls = f.pkt.cls;
  r.at = at;
  if (f.pkt.expects_response) r.flags |= metrics::trace_flag::kRequest;
  if (f.pkt.response_to) r.flags |= metrics::trace_flag::kResponse;
  if (f.pkt.access_attempt) r.flags |= metrics::trace_flag::kAccess;
  return r;
}

void Network::emit_record(const TraceRecord& r) {
  kpi_.add(r);
  if (options_.keep_trace) trace_.push_back(r);
  if (observer_) observer_(r);
}

void Network::inject(Packet p) {
  check_packet(p);
  Flight f;
  f.origin_us = p.created_at.us;
  f.pkt = std::move(p);
  start_flight(alloc(std::move(f)));
}

void Network::start_flight(std::uint32_t slot) {
  auto& f = flights_[slot];
  f.pkt.created_at = engine_.now();
  f.path = route(f.pkt.src, f.pkt.dst);
  f.hop = 0;
  f.stage = Stage::Fresh;
  f.high = options_.priority_queues && options_.priority_policy && f.pkt.cls.is_benign() &&
           options_.priority_policy->accepts(f.pkt.tag);
  ++stats_.emitted;
  emit_record(record(TraceKind::Emit, f, f.pkt.src));
  forward(slot);
}

void Network::forward(std::uint32_t slot) {
  const auto& f = flights_[slot];
  const auto& path = *f.path;
  NodeId from = path[f.hop];
  NodeId to = path[f.hop + 1];
  auto link = topology_.link_between(from, to);
  auto port = 2 * *link + (topology_.link(*link).a == from ? 0 : 1);
  enqueue(port, slot);
}

void Network::enqueue(std::uint32_t port, std::uint32_t slot) {
  auto& p = ports_[port];
  if (!p.serving) {
    start_tx(p, port, slot);
    return;
  }
  NodeId at = topology_.link(p.link).other(p.to);
  auto queued = p.high.size() + p.low.size();
  if (queued < p.capacity) {
    (flights_[slot].high ? p.high : p.low).push_back(slot);
  } else if (flights_[slot].high && !p.low.empty()) {
    auto victim = p.low.back();
    p.low.pop_back();
    drop(victim, TraceKind::QueueDrop, at);
    p.high.push_back(slot);
  } else {
    drop(slot, TraceKind::QueueDrop, at);
    return;
  }

  if (options_.reroute_on_congestion) {
    double occupancy = static_cast<double>(p.high.size() + p.low.size()) / static_cast<double>(p.capacity);
    double threshold = controller_.config().congestion_threshold;
    if (!p.congested && occupancy > threshold) {
      p.congested = true;
      for (const auto& r : controller_.handle_congestion(p.link, std::min(1.0, occupancy))) {
        routes_.erase({r.src, r.dst});
      }
    } else if (p.congested && occupancy <= threshold / 2) {
      p.congested = false;
    }
  }
}

void Network::start_tx(Port& p, std::uint32_t port, std::uint32_t slot) {
  p.serving = slot;
  std::uint64_t bits = std::uint64_t{flights_[slot].pkt.size} * 8;
  std::uint64_t tx_us = (bits * 1'000'000 + p.bandwidth_bps - 1) / p.bandwidth_bps;
  engine_.schedule_in(tx_us, sim::EventKind::PacketDeparture, port, slot);
}

void Network::on_departure(const sim::Event& e) {
  if (e.target == ports_.size()) {
    // chain finished the packet in service
    auto slot = static_cast<std::uint32_t>(e.payload);
    chain_serving_.reset();
    auto& f = flights_[slot];
    auto result = chain_result_;

    auto svc = record(TraceKind::ChainService, f, chain_node_);
    svc.value = result.cost_us;
    emit_record(svc);
    if (options_.capture && options_.capture->monitoring) {
      dataplane::capture_packet(*options_.capture, f.pkt, result.verdict, engine_.now());
    }

    if (result.verdict.is_block()) {
      auto key = control::FlowKey::of(f.pkt);
      auto rule = controller_.on_verdict(f.pkt, result.verdict, engine_.now());
      drop(slot, TraceKind::Block, chain_node_);
      if (rule && !live_rules_.contains(key)) {
        live_rules_.insert(key);
        rule_keys_.push_back(key);
        TraceRecord r;
        r.kind = TraceKind::RuleInstalled;
        r.time_us = rule->installed_at.us;
        r.src = key.src;
        r.dst = key.dst;
        r.tag = key.discriminator;
        r.at = chain_node_;
        emit_record(r);
        engine_.schedule(rule->installed_at + rule->idle_timeout_us, sim::EventKind::RuleTimeout, 0,
                         rule_keys_.size() - 1);
      }
    } else {
      f.path = route(chain_node_, f.pkt.dst);
      f.hop = 0;
      f.stage = Stage::FromChain;
      forward(slot);
    }

    if (!chain_queue_.empty()) {
      auto next = chain_queue_.front();
      chain_queue_.pop_front();
      start_chain(next);
    }
    return;
  }

  auto& p = ports_[e.target];
  auto slot = *p.serving;
  p.serving.reset();
  engine_.schedule_in(p.latency_us, sim::EventKind::PacketArrival, p.to.index, slot);
  if (!p.high.empty()) {
    auto next = p.high.front();
    p.high.pop_front();
    start_tx(p, e.target, next);
  } else if (!p.low.empty()) {
    auto next = p.low.front();
    p.low.pop_front();
    start_tx(p, e.target, next);
  }
}

void Network::enqueue_chain(std::uint32_t slot) {
  if (!chain_serving_) {
    start_chain(slot);
  } else if (chain_queue_.size() < options_.chain_queue_capacity) {
    chain_queue_.push_back(slot);
  } else {
    drop(slot, TraceKind::QueueDrop, chain_node_);
  }
}

void Network::start_chain(std::uint32_t slot) {
  chain_serving_ = slot;
  ++chain_presented_;
  chain_result_ = dataplane::chain_process(chain_, flights_[slot].pkt, engine_.now());
  if (options_.capture && options_.capture->monitoring) chain_result_.cost_us += options_.capture->cost_us_per_packet;
  engine_.schedule_in(chain_result_.cost_us, sim::EventKind::PacketDeparture, static_cast<std::uint32_t>(ports_.size()),
                      slot);
}

void Network::on_arrival(const sim::Event& e) {
  auto slot = static_cast<std::uint32_t>(e.payload);
  auto& f = flights_[slot];
  if (f.stage == Stage::Originate) {
    start_flight(slot);
    return;
  }
  ++f.hop;
  NodeId node = (*f.path)[f.hop];

  if (monitored_[node.index]) {
    auto r = record(TraceKind::Monitored, f, node);
    r.weight = options_.weights.of(f.pkt.cls);
    r.value = f.pkt.size;
    emit_record(r);
    monitor_pending_.emplace_back(r.weight, static_cast<double>(f.pkt.size));
  }

  if (f.stage == Stage::ToChain && node == chain_node_) {
    enqueue_chain(slot);
    return;
  }
  if (node == f.pkt.dst) {
    deliver(slot);
    return;
  }
  if (f.stage == Stage::Fresh) {
    f.stage = Stage::Routed;
    auto res = controller_.lookup(f.pkt, engine_.now());
    switch (res.kind) {
      case control::LookupResult::Kind::Drop:
        drop(slot, TraceKind::IngressDrop, node);
        return;
      case control::LookupResult::Kind::ForwardVia:
        f.path = std::make_shared<const control::Path>(std::move(res.path));
        f.hop = 0;
        break;
      case control::LookupResult::Kind::SendToChain:
        if (!chain_.empty()) {
          f.path = route(node, chain_node_);
          f.hop = 0;
          f.stage = Stage::ToChain;
        }
        break;
    }
  }
  forward(slot);
}

void Network::deliver(std::uint32_t slot) {
  auto& f = flights_[slot];
  f.pkt.delivered_at = engine_.now();
  ++stats_.delivered;
  emit_record(record(TraceKind::Deliver, f, f.pkt.dst));

  if (f.pkt.response_to) {
    auto r = record(TraceKind::Rtt, f, f.pkt.dst);
    r.value = engine_.now().us - f.origin_us;
    emit_record(r);
  }
  if (f.pkt.expects_response && generator_) {
    SimTime at = engine_.now() + options_.server_delay_us;
    Flight resp;
    resp.pkt = generator_->make_response(f.pkt, at, options_.response_size);
    resp.stage = Stage::Originate;
    resp.origin_us = f.pkt.created_at.us;
    NodeId server = f.pkt.dst;
    release(slot);
    auto rs = alloc(std::move(resp));
    engine_.schedule(at, sim::EventKind::PacketArrival, server.index, rs);
    return;
  }
  release(slot);
}

void Network::drop(std::uint32_t slot, TraceKind kind, NodeId at) {
  emit_record(record(kind, flights_[slot], at));
  if (kind == TraceKind::QueueDrop) {
    ++stats_.queue_dropped;
  } else {
    ++stats_.blocked;
  }
  release(slot);
}

void Network::on_rule_timeout(const sim::Event& e) {
  const auto key = rule_keys_.at(e.payload);
  for (const auto& rule : controller_.rules_for(key)) {
    if (rule.priority != controller_.config().drop_priority) continue;
    auto expiry = rule.last_hit.us + rule.idle_timeout_us;
    if (engine_.now().us < expiry) {
      engine_.schedule(SimTime{expiry}, sim::EventKind::RuleTimeout, 0, e.payload);
      return;
    }
  }
  controller_.expire(engine_.now());
  if (live_rules_.erase(key) > 0) {
    TraceRecord r;
    r.kind = TraceKind::RuleExpired;
    r.time_us = engine_.now().us;
    r.src = key.src;
    r.dst = key.dst;
    r.tag = key.discriminator;
    r.at = chain_node_;
    emit_record(r);
  }
}

void Network::on_monitor_sample(const sim::Event&) {
  metrics::MonitorSample s;
  s.time = engine_.now();
  s.packets = std::move(monitor_pending_);
  monitor_pending_.clear();
  monitor_.push_back(std::move(s));
  auto next = engine_.now() + options_.monitor_interval_us;
  if (next.us <= horizon_us_) engine_.schedule(next, sim::EventKind::MonitorSample);
}

FlowStats Network::stats() const {
  FlowStats s = stats_;
  s.in_flight = s.emitted - s.delivered - s.blocked - s.queue_dropped;
  return s;
}

std::optional<std::filesystem::path> Network::save_capture() {
  if (!options_.capture) return std::nullopt;
  return dataplane::stop_and_save(*options_.capture);
}

}  // namespace vnfsdn::scenario
