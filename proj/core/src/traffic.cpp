#include "vnfsdn/traffic/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vnfsdn::traffic {

void SizeDist::check() const {
  if (lo < kMinPacketSize || hi > kMaxPacketSize || lo > hi) {
    throw std::invalid_argument("packet size bounds must satisfy 64 <= lo <= hi <= 9000");
  }
}

std::uint32_t SizeDist::draw(sim::RngStream& rng) const {
  if (kind == Kind::Fixed) return lo;
  auto span = static_cast<double>(hi - lo + 1);
  auto v = lo + static_cast<std::uint32_t>(rng.uniform() * span);
  return std::min(v, hi);
}

std::uint32_t SizeDist::hashed(std::uint64_t key) const {
  if (kind == Kind::Fixed) return lo;
  std::uint64_t h = sim::mix64(key ^ 0x5bd1e9955bd1e995ULL);
  return lo + static_cast<std::uint32_t>(h % (std::uint64_t{hi} - lo + 1));
}

void BenignProfile::check() const {
  if (!(rate_pps > 0.0)) throw std::invalid_argument("benign rate must be positive");
  if (!(server_share >= 0.0 && server_share <= 1.0)) throw std::invalid_argument("server_share must lie in [0, 1]");
  size.check();
  response_size.check();
}

void DdosProfile::check() const {
  if (!(rate_multiplier >= 0.0) || !(base_rate_pps > 0.0)) throw std::invalid_argument("attack rates must be >= 0");
  if (!(start < stop)) throw std::invalid_argument("attack start must precede stop");
  if (std::find(attackers.begin(), attackers.end(), target) != attackers.end()) {
    throw std::invalid_argument("the attack target cannot be an attacker");
  }
  size.check();
}

void AccessProfile::check() const {
  if (!(authorized_pps >= 0.0) || !(unauthorized_pps >= 0.0)) throw std::invalid_argument("access rates must be >= 0");
  if ((authorized_pps > 0.0 || unauthorized_pps > 0.0) && sources.empty()) {
    throw std::invalid_argument("access attempts need at least one source");
  }
  size.check();
}

TrafficGenerator::TrafficGenerator(sim::Engine& engine, sim::RngRegistry& rng, SimTime stop, Sink sink)
    : engine_(engine), rng_(rng), stop_(stop), sink_(std::move(sink)) {
  engine_.on(sim::EventKind::TrafficEmit, [this](const sim::Event& e) { emit(e.target); });
  engine_.on(sim::EventKind::AttackStart, [this](const sim::Event& e) {
    for (auto i : attacks_.at(e.target)) {
      sources_[i].active = true;
      schedule_next(i, engine_.now());
    }
  });
  engine_.on(sim::EventKind::AttackStop, [this](const sim::Event& e) {
    for (auto i : attacks_.at(e.target)) sources_[i].active = false;
  });
}

void TrafficGenerator::schedule_next(std::uint32_t index, SimTime from) {
  auto& s = sources_[index];
  double gap = s.rng->exponential(s.rate);
  auto at = from + static_cast<std::uint64_t>(std::llround(gap * 1e6));
  if (at < s.stop) engine_.schedule(at, sim::EventKind::TrafficEmit, index);
}

void TrafficGenerator::emit(std::uint32_t index) {
  auto& s = sources_[index];
  if (!s.active || engine_.now() >= s.stop) return;

  Packet p;
  p.id = (std::uint64_t{index} + 1) << kSourceShift | s.seq++;
  p.size = s.size.draw(*s.rng);
  p.protocol = s.protocol;
  p.cls = s.cls;
  p.tag = s.tag;
  p.created_at = engine_.now();
  p.access_attempt = s.access;
  p.src = s.src;

  switch (s.kind) {
    case Source::Kind::Benign: {
      bool to_server = s.peers.empty() || (!s.servers.empty() && s.rng->uniform() < s.server_share);
      const auto& pool = to_server ? s.servers : s.peers;
      p.dst = pool.size() == 1 ? pool.front() : pool[static_cast<std::size_t>(s.rng->uniform() * pool.size())];
      p.expects_response = to_server && s.request;
      ++counts_.benign;
      break;
    }
    case Source::Kind::Ddos:
      p.dst = s.servers.front();
      ++counts_.threat;
      break;
    case Source::Kind::Access:
      p.src = s.origins.size() == 1 ? s.origins.front()
                                    : s.origins[static_cast<std::size_t>(s.rng->uniform() * s.origins.size())];
      p.dst = s.servers.front();
      ++counts_.access;
      break;
  }
  schedule_next(index, engine_.now());
  sink_(std::move(p));
}

void TrafficGenerator::add_benign(const BenignProfile& p, NodeId host, std::vector<NodeId> servers,
                                  std::vector<NodeId> peers) {
  p.check();
  std::erase(peers, host);
  if (servers.empty() && peers.empty()) throw std::invalid_argument("benign source has no destination");
  Source s;
  s.kind = Source::Kind::Benign;
  s.rng = &rng_.register_stream("benign/" + std::to_string(host.index));
  s.rate = p.rate_pps;
  s.src = host;
  s.servers = std::move(servers);
  s.peers = p.server_share < 1.0 ? std::move(peers) : std::vector<NodeId>{};
  s.server_share = p.server_share;
  s.size = p.size;
  s.tag = SecurityTag(p.tag);
  s.protocol = p.protocol;
  s.request = p.request_response;
  s.stop = stop_;
  auto index = static_cast<std::uint32_t>(sources_.size());
  sources_.push_back(std::move(s));
  schedule_next(index, SimTime{0});
}

void TrafficGenerator::add_ddos(const DdosProfile& p) {
  p.check();
  auto attack = static_cast<std::uint32_t>(attacks_.size());
  attacks_.emplace_back();
  SimTime stop = std::min(p.stop, stop_);
  for (auto a : p.attackers) {
    if (!(p.rate_per_attacker() > 0.0)) break;
    Source s;
    s.kind = Source::Kind::Ddos;
    s.rng = &rng_.register_stream("ddos/" + std::to_string(attack) + "/" + std::to_string(a.index));
    s.rate = p.rate_per_attacker();
    s.src = a;
    s.servers = {p.target};
    s.size = p.size;
    s.tag = SecurityTag(p.tag);
    s.protocol = protocol_of(p.kind);
    s.cls = PacketClass::threat(p.kind);
    s.stop = stop;
    s.active = false;
    attacks_.back().push_back(static_cast<std::uint32_t>(sources_.size()));
    sources_.push_back(std::move(s));
  }
  if (p.start < stop) {
    engine_.schedule(p.start, sim::EventKind::AttackStart, attack);
    engine_.schedule(stop, sim::EventKind::AttackStop, attack);
  }
}

void TrafficGenerator::add_access(const AccessProfile& p) {
  p.check();
  auto add = [&](double rate, const std::string& stream, const std::string& tag, PacketClass cls) {
    if (!(rate > 0.0)) return;
    Source s;
    s.kind = Source::Kind::Access;
    s.rng = &rng_.register_stream(stream);
    s.rate = rate;
    s.origins = p.sources;
    s.servers = {p.target};
    s.size = p.size;
    s.tag = SecurityTag(tag);
    s.cls = cls;
    s.access = true;
    s.stop = stop_;
    auto index = static_cast<std::uint32_t>(sources_.size());
    sources_.push_back(std::move(s));
    schedule_next(index, SimTime{0});
  };
  add(p.authorized_pps, "access/authorized", p.authorized_tag, PacketClass::benign());
  add(p.unauthorized_pps, "access/unauthorized", p.unauthorized_tag, PacketClass::unauthorized());
}

Packet TrafficGenerator::make_response(const Packet& request, SimTime now, const SizeDist& size) {
  Packet r;
  r.id = response_seq_++;
  r.src = request.dst;
  r.dst = request.src;
  r.size = size.hashed(request.id);
  r.protocol = request.protocol;
  r.cls = request.cls;
  r.tag = request.tag;
  r.created_at = now;
  r.response_to = request.id;
  ++counts_.responses;
  return r;
}

void emit_benign(TrafficGenerator& g, const BenignProfile& p, NodeId host, std::vector<NodeId> servers,
                 std::vector<NodeId> peers) {
  g.add_benign(p, host, std::move(servers), std::move(peers));
}

void emit_ddos(TrafficGenerator& g, const DdosProfile& p) { g.add_ddos(p); }

void emit_access_attempts(TrafficGenerator& g, const AccessProfile& p) { g.add_access(p); }

}  // namespace vnfsdn::traffic
