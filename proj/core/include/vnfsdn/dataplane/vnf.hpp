#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnfsdn/model/types.hpp"
#include "vnfsdn/sim/rng.hpp"

namespace vnfsdn::dataplane {

enum class BlockReason : std::uint8_t { PolicyMismatch, FirewallRule, IdsSignature, IdsAnomaly, ProfileDetection };

std::string_view to_string(BlockReason r);

class Verdict {
 public:
  static constexpr Verdict forward() { return Verdict(false, BlockReason::PolicyMismatch); }
  static constexpr Verdict block(BlockReason r) { return Verdict(true, r); }

  constexpr bool is_block() const { return blocked_; }
  constexpr bool is_forward() const { return !blocked_; }
  /// Only meaningful for Block verdicts.
  constexpr BlockReason reason() const { return reason_; }

  constexpr bool operator==(const Verdict& o) const {
    return blocked_ == o.blocked_ && (!blocked_ || reason_ == o.reason_);
  }

  /// "Forward" or "Block:<reason>".
  std::string to_string() const;
  static Verdict parse(std::string_view s);

 private:
  constexpr Verdict(bool b, BlockReason r) : blocked_(b), reason_(r) {}
  bool blocked_;
  BlockReason reason_;
};

class InactiveVnf : public std::logic_error {
 public:
  InactiveVnf() : std::logic_error("filter VNF is not active") {}
};

inline constexpr std::uint64_t kDefaultFilterCostUs = 2;
inline constexpr std::uint64_t kDefaultFirewallCostUs = 1;
inline constexpr std::uint64_t kDefaultIdsCostUs = 5;
inline constexpr std::uint64_t kDefaultCaptureCostUs = 1;

/// Tag-policy filter. Emits verdicts only while active.
struct FilterVnf {
  bool active = true;
  std::shared_ptr<const SecurityPolicy> policy;
  std::uint64_t cost_us_per_packet = kDefaultFilterCostUs;
  double memory_kb_per_flow = 1.0;
};

/// Forward iff the tag is accepted and the packet is not an unauthorized access attempt.
Verdict filter_packet(const FilterVnf& v, const Packet& p);

struct FirewallVnf {
  enum class Action : std::uint8_t { Allow, Deny };
  struct Rule {
    std::optional<NodeId> src;
    std::optional<NodeId> dst;
    std::optional<Protocol> protocol;
    Action action = Action::Deny;

    bool matches(const Packet& p) const {
      return (!src || *src == p.src) && (!dst || *dst == p.dst) && (!protocol || *protocol == p.protocol);
    }
  };

  std::vector<Rule> rules;
  Action default_action = Action::Allow;
  std::uint64_t cost_us_per_packet = kDefaultFirewallCostUs;
  double memory_kb_per_flow = 0.5;
  // Deny rules are pushed to the switches as ingress drop entries at deployment.
  bool offload_deny_rules = true;
};

/// First matching rule wins; Deny maps to Block(FirewallRule).
Verdict firewall_check(const FirewallVnf& f, const Packet& p);

/// Signature + per-source sliding-window rate detector.
struct IdsVnf {
  std::set<ThreatKind> signatures;
  std::uint64_t anomaly_window_us = 1'000'000;
  double anomaly_threshold_pps = 1000.0;
  std::uint64_t cost_us_per_packet = kDefaultIdsCostUs;
  double memory_kb_per_flow = 4.0;

  // arrival times inside the trailing window, per source
  std::map<NodeId, std::deque<std::uint64_t>> counters;
};

/// Signature match first, then rate anomaly. Records (p.src, t) in the window either way.
Verdict ids_check(IdsVnf& ids, const Packet& p, SimTime t);

struct MitigationProfile {
  std::string name;
  double detection_probability = 0.0;
  std::uint64_t detection_delay_us = 0;
  std::uint64_t cost_us_per_packet = 3;
  double memory_kb_per_flow = 2.0;
  // QoS-style baselines serve the accepted-tag class ahead of everything else.
  bool prioritize_benign = false;

  void check() const;
};

/// Parametric stand-in for a baseline detector. Detection for a (src, dst) flow
/// becomes possible detection_delay after the flow's first threat packet.
struct ProfileVnf {
  MitigationProfile profile;
  sim::RngStream* rng = nullptr;  // stream "profile", owned by the run
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> first_seen_us;
};

Verdict profile_check(ProfileVnf& m, const Packet& p, SimTime t);

using Vnf = std::variant<FilterVnf, FirewallVnf, IdsVnf, ProfileVnf>;

std::uint64_t cost_of(const Vnf& v);
double memory_kb_per_flow(const Vnf& v);
std::string_view name_of(const Vnf& v);

struct ChainResult {
  Verdict verdict = Verdict::forward();
  std::uint64_t cost_us = 0;
  std::size_t consulted = 0;
};

/// Ordered security-function pipeline. Stops at the first Block.
struct VnfChain {
  std::vector<Vnf> vnfs;

  bool empty() const { return vnfs.empty(); }
};

ChainResult chain_process(VnfChain& c, const Packet& p, SimTime t);

}  // namespace vnfsdn::dataplane
