#include "vnfsdn/dataplane/vnf.hpp"

namespace vnfsdn::dataplane {

std::string_view to_string(BlockReason r) {
  switch (r) {
    case BlockReason::PolicyMismatch: return "PolicyMismatch";
    case BlockReason::FirewallRule: return "FirewallRule";
    case BlockReason::IdsSignature: return "IdsSignature";
    case BlockReason::IdsAnomaly: return "IdsAnomaly";
    case BlockReason::ProfileDetection: return "ProfileDetection";
  }
  return "?";
}

std::string Verdict::to_string() const {
  if (!blocked_) return "Forward";
  return "Block:" + std::string(dataplane::to_string(reason_));
}

Verdict Verdict::parse(std::string_view s) {
  if (s == "Forward") return forward();
  constexpr std::string_view prefix = "Block:";
  if (s.starts_with(prefix)) {
    auto r = s.substr(prefix.size());
    for (auto reason : {BlockReason::PolicyMismatch, BlockReason::FirewallRule, BlockReason::IdsSignature,
                        BlockReason::IdsAnomaly, BlockReason::ProfileDetection}) {
      if (dataplane::to_string(reason) == r) return block(reason);
    }
  }
  throw std::invalid_argument("unknown verdict: " + std::string(s));
}

Verdict filter_packet(const FilterVnf& v, const Packet& p) {
  if (!v.active) throw InactiveVnf();
  if (v.policy && v.policy->accepts(p.tag) && !p.cls.is_unauthorized()) return Verdict::forward();
  return Verdict::block(BlockReason::PolicyMismatch);
}

Verdict firewall_check(const FirewallVnf& f, const Packet& p) {
  for (const auto& rule : f.rules) {
    if (rule.matches(p)) {
      return rule.action == FirewallVnf::Action::Deny ? Verdict::block(BlockReason::FirewallRule)
                                                      : Verdict::forward();
    }
  }
  return f.default_action == FirewallVnf::Action::Deny ? Verdict::block(BlockReason::FirewallRule)
                                                       : Verdict::forward();
}

Verdict ids_check(IdsVnf& ids, const Packet& p, SimTime t) {
  auto& window = ids.counters[p.src];
  window.push_back(t.us);
  // keep arrivals in (t - window, t]
  while (!window.empty() && window.front() + ids.anomaly_window_us <= t.us) window.pop_front();

  if (p.cls.is_threat() && ids.signatures.contains(p.cls.threat_kind())) {
    return Verdict::block(BlockReason::IdsSignature);
  }
  double window_s = static_cast<double>(ids.anomaly_window_us) * 1e-6;
  double rate = static_cast<double>(window.size()) / window_s;
  if (rate > ids.anomaly_threshold_pps) return Verdict::block(BlockReason::IdsAnomaly);
  return Verdict::forward();
}

void MitigationProfile::check() const {
  if (!(detection_probability >= 0.0 && detection_probability <= 1.0)) {
    throw std::invalid_argument("detection_probability must lie in [0, 1]");
  }
}

Verdict profile_check(ProfileVnf& m, const Packet& p, SimTime t) {
  if (!p.cls.is_threat()) return Verdict::forward();
  auto [it, first] = m.first_seen_us.try_emplace({p.src, p.dst}, t.us);
  if (t.us < it->second + m.profile.detection_delay_us) return Verdict::forward();
  double p_detect = m.profile.detection_probability;
  if (p_detect <= 0.0) return Verdict::forward();
  if (p_detect >= 1.0) return Verdict::block(BlockReason::ProfileDetection);
  if (m.rng == nullptr) throw std::logic_error("profile VNF has no random stream");
  return m.rng->uniform() < p_detect ? Verdict::block(BlockReason::ProfileDetection) : Verdict::forward();
}

std::uint64_t cost_of(const Vnf& v) {
  return std::visit(
      [](const auto& x) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProfileVnf>) {
          return x.profile.cost_us_per_packet;
        } else {
          return x.cost_us_per_packet;
        }
      },
      v);
}

double memory_kb_per_flow(const Vnf& v) {
  return std::visit(
      [](const auto& x) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProfileVnf>) {
          return x.profile.memory_kb_per_flow;
        } else {
          return x.memory_kb_per_flow;
        }
      },
      v);
}

std::string_view name_of(const Vnf& v) {
  struct Namer {
    std::string_view operator()(const FilterVnf&) const { return "filter"; }
    std::string_view operator()(const FirewallVnf&) const { return "firewall"; }
    std::string_view operator()(const IdsVnf&) const { return "ids"; }
    std::string_view operator()(const ProfileVnf& p) const { return p.profile.name; }
  };
  return std::visit(Namer{}, v);
}

ChainResult chain_process(VnfChain& c, const Packet& p, SimTime t) {
  ChainResult out;
  for (auto& vnf : c.vnfs) {
    Verdict v = std::visit(
        [&](auto& x) -> Verdict {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, FilterVnf>) {
            return filter_packet(x, p);
          } else if constexpr (std::is_same_v<T, FirewallVnf>) {
            return firewall_check(x, p);
          } else if constexpr (std::is_same_v<T, IdsVnf>) {
            return ids_check(x, p, t);
          } else {
            return profile_check(x, p, t);
          }
        },
        vnf);
    out.cost_us += cost_of(vnf);
    ++out.consulted;
    if (v.is_block()) {
      out.verdict = v;
      return out;
    }
  }
  return out;
}

}  // namespace vnfsdn::dataplane
