#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vnfsdn/model/types.hpp"
#include "vnfsdn/sim/engine.hpp"
#include "vnfsdn/sim/rng.hpp"

namespace vnfsdn::traffic {

struct SizeDist {
  enum class Kind : std::uint8_t { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  std::uint32_t lo = 1000;
  std::uint32_t hi = 1000;

  static SizeDist fixed(std::uint32_t bytes) { return SizeDist{Kind::Fixed, bytes, bytes}; }
  static SizeDist uniform(std::uint32_t lo, std::uint32_t hi) { return SizeDist{Kind::Uniform, lo, hi}; }

  double mean() const { return 0.5 * (static_cast<double>(lo) + static_cast<double>(hi)); }
  /// Throws std::invalid_argument when bounds leave [64, 9000] or lo > hi.
  void check() const;
  std::uint32_t draw(sim::RngStream& rng) const;
  /// Deterministic size for a given key, independent of any stream position.
  std::uint32_t hashed(std::uint64_t key) const;
};

struct BenignProfile {
  double rate_pps = 10.0;  // per host, Poisson
  SizeDist size = SizeDist::uniform(200, 1400);
  std::string tag = "benign";
  Protocol protocol = Protocol::Tcp;
  bool request_response = true;  // server-bound packets ask for a response
  SizeDist response_size = SizeDist::uniform(200, 1400);
  double server_share = 1.0;  // remainder goes to a uniformly drawn peer host

  void check() const;
};

struct DdosProfile {
  std::vector<NodeId> attackers;
  NodeId target;
  double rate_multiplier = 50.0;
  double base_rate_pps = 10.0;
  ThreatKind kind = ThreatKind::SynFlood;
  SimTime start;
  SimTime stop;
  std::string tag = "attack";
  SizeDist size = SizeDist::fixed(1000);

  double rate_per_attacker() const { return rate_multiplier * base_rate_pps; }
  void check() const;
};

struct AccessProfile {
  double authorized_pps = 0.0;
  double unauthorized_pps = 0.0;
  std::vector<NodeId> sources;
  NodeId target;
  std::string authorized_tag = "benign";
  std::string unauthorized_tag = "intruder";
  SizeDist size = SizeDist::fixed(128);

  void check() const;
};

struct EmitCounts {
  std::uint64_t benign = 0;
  std::uint64_t threat = 0;
  std::uint64_t access = 0;
  std::uint64_t responses = 0;

  std::uint64_t total() const { return benign + threat + access + responses; }
};

/// Packet ids carry the source index in the high bits so a source's ids do
/// not depend on which other sources exist. Index 0 is kept for responses.
inline constexpr int kSourceShift = 40;

/// Owns the traffic sources of one run and drives them through the engine's
/// TrafficEmit, AttackStart and AttackStop events. Each source draws only from
/// its own named stream.
class TrafficGenerator {
 public:
  using Sink = std::function<void(Packet)>;

  TrafficGenerator(sim::Engine& engine, sim::RngRegistry& rng, SimTime stop, Sink sink);
  TrafficGenerator(const TrafficGenerator&) = delete;
  TrafficGenerator& operator=(const TrafficGenerator&) = delete;

  /// Stream "benign/<host>". servers receive server_share of the packets, peers the rest.
  void add_benign(const BenignProfile& p, NodeId host, std::vector<NodeId> servers, std::vector<NodeId> peers);
  /// Streams "ddos/<profile>/<attacker>".
  void add_ddos(const DdosProfile& p);
  /// Streams "access/authorized" and "access/unauthorized".
  void add_access(const AccessProfile& p);

  /// Response to a delivered request; size is a pure function of the request id.
  Packet make_response(const Packet& request, SimTime now, const SizeDist& size);

  const EmitCounts& counts() const { return counts_; }
  std::size_t source_count() const { return sources_.size(); }

 private:
  struct Source {
    enum class Kind : std::uint8_t { Benign, Ddos, Access };
    Kind kind = Kind::Benign;
    sim::RngStream* rng = nullptr;
    double rate = 0.0;
    NodeId src;
    std::vector<NodeId> servers;
    std::vector<NodeId> peers;
    std::vector<NodeId> origins;  // access attempts pick one per packet
    double server_share = 1.0;
    SizeDist size;
    SecurityTag tag;
    Protocol protocol = Protocol::Tcp;
    PacketClass cls = PacketClass::benign();
    bool request = false;
    bool access = false;
    SimTime stop;
    bool active = true;
    std::uint64_t seq = 0;
  };

  void schedule_next(std::uint32_t index, SimTime from);
  void emit(std::uint32_t index);

  sim::Engine& engine_;
  sim::RngRegistry& rng_;
  SimTime stop_;
  Sink sink_;
  std::vector<Source> sources_;
  std::vector<std::vector<std::uint32_t>> attacks_;  // ddos profile -> its sources
  std::vector<SimTime> attack_start_;
  std::uint64_t response_seq_ = 0;
  EmitCounts counts_;
};

/// Convenience wrappers named after the generator operations.
void emit_benign(TrafficGenerator& g, const BenignProfile& p, NodeId host, std::vector<NodeId> servers,
                 std::vector<NodeId> peers = {});
void emit_ddos(TrafficGenerator& g, const DdosProfile& p);
void emit_access_attempts(TrafficGenerator& g, const AccessProfile& p);

}  // namespace vnfsdn::traffic
