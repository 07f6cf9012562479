#include "vnfsdn/model/types.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace vnfsdn {

namespace {

struct TagTable {
  std::mutex mu;
  std::deque<std::string> names{""};
  std::unordered_map<std::string, std::uint32_t> ids{{"", 0}};
};

TagTable& tag_table() {
  static TagTable table;
  return table;
}

}  // namespace

SecurityTag::SecurityTag(std::string_view name) {
  auto& t = tag_table();
  std::lock_guard lock(t.mu);
  auto [it, inserted] = t.ids.try_emplace(std::string(name), static_cast<std::uint32_t>(t.names.size()));
  if (inserted) t.names.emplace_back(name);
  id_ = it->second;
}

std::string_view SecurityTag::name() const {
  auto& t = tag_table();
  std::lock_guard lock(t.mu);
  // deque never relocates existing elements
  return t.names.at(id_);
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::UeHost: return "UeHost";
    case NodeKind::Switch: return "Switch";
    case NodeKind::Router: return "Router";
    case NodeKind::Server: return "Server";
    case NodeKind::ControllerNode: return "ControllerNode";
    case NodeKind::VnfHost: return "VnfHost";
  }
  return "?";
}

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Tcp: return "tcp";
    case Protocol::Udp: return "udp";
    case Protocol::Icmp: return "icmp";
  }
  return "?";
}

std::string_view to_string(ThreatKind k) {
  switch (k) {
    case ThreatKind::SynFlood: return "SynFlood";
    case ThreatKind::UdpFlood: return "UdpFlood";
    case ThreatKind::IcmpFlood: return "IcmpFlood";
    case ThreatKind::PortScan: return "PortScan";
  }
  return "?";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "tcp") return Protocol::Tcp;
  if (s == "udp") return Protocol::Udp;
  if (s == "icmp") return Protocol::Icmp;
  throw std::invalid_argument("unknown protocol: " + std::string(s));
}

ThreatKind parse_threat_kind(std::string_view s) {
  if (s == "SynFlood") return ThreatKind::SynFlood;
  if (s == "UdpFlood") return ThreatKind::UdpFlood;
  if (s == "IcmpFlood") return ThreatKind::IcmpFlood;
  if (s == "PortScan") return ThreatKind::PortScan;
  throw std::invalid_argument("unknown threat kind: " + std::string(s));
}

NodeKind parse_node_kind(std::string_view s) {
  for (auto k : {NodeKind::UeHost, NodeKind::Switch, NodeKind::Router, NodeKind::Server, NodeKind::ControllerNode,
                 NodeKind::VnfHost}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown node kind: " + std::string(s));
}

Protocol protocol_of(ThreatKind k) {
  switch (k) {
    case ThreatKind::UdpFlood: return Protocol::Udp;
    case ThreatKind::IcmpFlood: return Protocol::Icmp;
    case ThreatKind::SynFlood:
    case ThreatKind::PortScan: return Protocol::Tcp;
  }
  return Protocol::Tcp;
}

std::string PacketClass::to_string() const {
  switch (kind_) {
    case Kind::Benign: return "Benign";
    case Kind::UnauthorizedAccess: return "UnauthorizedAccess";
    case Kind::Threat: return "Threat:" + std::string(vnfsdn::to_string(threat_));
  }
  return "?";
}

PacketClass PacketClass::parse(std::string_view s) {
  if (s == "Benign") return benign();
  if (s == "UnauthorizedAccess") return unauthorized();
  constexpr std::string_view prefix = "Threat:";
  if (s.starts_with(prefix)) return threat(parse_threat_kind(s.substr(prefix.size())));
  throw std::invalid_argument("unknown packet class: " + std::string(s));
}

void check_packet(const Packet& p) {
  if (p.size < kMinPacketSize || p.size > kMaxPacketSize) {
    throw std::invalid_argument("packet size out of range: " + std::to_string(p.size));
  }
  if (p.delivered_at && *p.delivered_at < p.created_at) {
    throw std::invalid_argument("packet delivered before it was created");
  }
}

SecurityPolicy SecurityPolicy::of(std::initializer_list<std::string_view> tags) {
  SecurityPolicy p;
  for (auto t : tags) p.accepted_tags.insert(SecurityTag(t));
  return p;
}

}  // namespace vnfsdn
