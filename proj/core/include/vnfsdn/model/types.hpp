#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vnfsdn {

/// Simulated time in integer microseconds.
struct SimTime {
  std::uint64_t us = 0;

  constexpr auto operator<=>(const SimTime&) const = default;

  static constexpr SimTime from_seconds(double s) { return SimTime{static_cast<std::uint64_t>(s * 1e6 + 0.5)}; }
  static constexpr SimTime from_ms(double ms) { return SimTime{static_cast<std::uint64_t>(ms * 1e3 + 0.5)}; }
  constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }
  constexpr double ms() const { return static_cast<double>(us) * 1e-3; }

  constexpr SimTime operator+(std::uint64_t delta_us) const { return SimTime{us + delta_us}; }
  constexpr SimTime& operator+=(std::uint64_t delta_us) {
    us += delta_us;
    return *this;
  }
};

struct NodeId {
  std::uint32_t index = 0;
  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind : std::uint8_t { UeHost, Switch, Router, Server, ControllerNode, VnfHost };

enum class Protocol : std::uint8_t { Tcp, Udp, Icmp };

enum class ThreatKind : std::uint8_t { SynFlood, UdpFlood, IcmpFlood, PortScan };

std::string_view to_string(NodeKind k);
std::string_view to_string(Protocol p);
std::string_view to_string(ThreatKind k);
Protocol parse_protocol(std::string_view s);
ThreatKind parse_threat_kind(std::string_view s);
NodeKind parse_node_kind(std::string_view s);

/// Protocol a flood of the given kind travels on.
Protocol protocol_of(ThreatKind k);

/// Traffic class of a packet. Threat carries the attack kind.
class PacketClass {
 public:
  enum class Kind : std::uint8_t { Benign, Threat, UnauthorizedAccess };

  static constexpr PacketClass benign() { return PacketClass{Kind::Benign, ThreatKind::SynFlood}; }
  static constexpr PacketClass threat(ThreatKind k) { return PacketClass{Kind::Threat, k}; }
  static constexpr PacketClass unauthorized() { return PacketClass{Kind::UnauthorizedAccess, ThreatKind::SynFlood}; }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_benign() const { return kind_ == Kind::Benign; }
  constexpr bool is_threat() const { return kind_ == Kind::Threat; }
  constexpr bool is_unauthorized() const { return kind_ == Kind::UnauthorizedAccess; }
  /// Only meaningful for threats.
  constexpr ThreatKind threat_kind() const { return threat_; }

  constexpr bool operator==(const PacketClass& o) const {
    return kind_ == o.kind_ && (kind_ != Kind::Threat || threat_ == o.threat_);
  }

  /// "Benign", "Threat:SynFlood", "UnauthorizedAccess".
  std::string to_string() const;
  static PacketClass parse(std::string_view s);

 private:
  constexpr PacketClass(Kind k, ThreatKind t) : kind_(k), threat_(t) {}
  Kind kind_;
  ThreatKind threat_;
};

/// Interned security tag. Equality is by name; the handle is a process-wide index.
class SecurityTag {
 public:
  SecurityTag() : id_(0) {}
  explicit SecurityTag(std::string_view name);

  std::string_view name() const;
  std::uint32_t id() const { return id_; }

  auto operator<=>(const SecurityTag& o) const { return id_ <=> o.id_; }
  bool operator==(const SecurityTag& o) const { return id_ == o.id_; }

 private:
  std::uint32_t id_;
};

inline constexpr std::uint32_t kMinPacketSize = 64;
inline constexpr std::uint32_t kMaxPacketSize = 9000;

struct Packet {
  std::uint64_t id = 0;
  NodeId src;
  NodeId dst;
  std::uint32_t size = 0;  // bytes
  Protocol protocol = Protocol::Tcp;
  PacketClass cls = PacketClass::benign();
  SecurityTag tag;
  SimTime created_at;
  std::optional<SimTime> delivered_at;

  // request/response bookkeeping for round-trip measurement
  bool expects_response = false;
  std::optional<std::uint64_t> response_to;
  // counted towards access attempts rather than ordinary traffic
  bool access_attempt = false;
};

/// Throws std::invalid_argument if size or timestamps violate packet invariants.
void check_packet(const Packet& p);

struct SecurityPolicy {
  std::set<SecurityTag> accepted_tags;

  bool accepts(const SecurityTag& t) const { return accepted_tags.contains(t); }
  static SecurityPolicy of(std::initializer_list<std::string_view> tags);
};

}  // namespace vnfsdn

template <>
struct std::hash<vnfsdn::NodeId> {
  std::size_t operator()(const vnfsdn::NodeId& n) const noexcept { return std::hash<std::uint32_t>{}(n.index); }
};
