#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>
#include <tuple>

#include "vnfsdn/dataplane/capture.hpp"
#include "vnfsdn/metrics/formulas.hpp"
#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/runner.hpp"

namespace vnfsdn::scenario {
namespace {

using metrics::TraceKind;
using metrics::TraceRecord;

namespace fs = std::filesystem;

struct Runs {
  RunResult no_security, vnfsdn, vnfsdn_firewall;
};

const Runs& runs() {
  static const Runs r = [] {
    auto cfg = load_config(6, std::nullopt, {"duration_s=20", "security.capture.enabled=true"});
    RunOptions opts;
    opts.keep_trace = true;
    opts.capture_dir = fs::temp_directory_path() / "vnfsdn_network";
    fs::remove_all(opts.capture_dir);
    return Runs{run_single(cfg, "no_security", opts), run_single(cfg, "vnfsdn", opts),
                run_single(cfg, "vnfsdn_firewall", opts)};
  }();
  return r;
}

bool terminal(TraceKind k) {
  return k == TraceKind::Deliver || k == TraceKind::QueueDrop || k == TraceKind::Block || k == TraceKind::IngressDrop;
}

void expect_conservation(const RunResult& run) {
  std::map<std::uint64_t, TraceKind> fate;
  std::set<std::uint64_t> emitted;
  FlowStats counted;
  for (const auto& r : run.trace) {
    if (r.kind == TraceKind::Emit) {
      ASSERT_TRUE(emitted.insert(r.packet_id).second) << "packet " << r.packet_id << " emitted twice";
      ++counted.emitted;
    } else if (terminal(r.kind)) {
      ASSERT_TRUE(emitted.contains(r.packet_id)) << "packet " << r.packet_id << " ended before it started";
      ASSERT_TRUE(fate.emplace(r.packet_id, r.kind).second) << "packet " << r.packet_id << " ended twice";
      switch (r.kind) {
        case TraceKind::Deliver: ++counted.delivered; break;
        case TraceKind::QueueDrop: ++counted.queue_dropped; break;
        default: ++counted.blocked; break;
      }
    }
  }
  counted.in_flight = counted.emitted - fate.size();
  EXPECT_EQ(counted.emitted, run.stats.emitted);
  EXPECT_EQ(counted.delivered, run.stats.delivered);
  EXPECT_EQ(counted.blocked, run.stats.blocked);
  EXPECT_EQ(counted.queue_dropped, run.stats.queue_dropped);
  EXPECT_EQ(counted.in_flight, run.stats.in_flight);
  EXPECT_EQ(counted.emitted, counted.delivered + counted.blocked + counted.queue_dropped + counted.in_flight);
  EXPECT_EQ(counted.emitted, run.emitted.total());
}

TEST(Network, EveryEmittedPacketHasAtMostOneFate) {
  expect_conservation(runs().no_security);
  expect_conservation(runs().vnfsdn);
  expect_conservation(runs().vnfsdn_firewall);
}

TEST(Network, FilteringDeliversOnlyBenignPackets) {
  for (const auto* run : {&runs().vnfsdn, &runs().vnfsdn_firewall}) {
    std::uint64_t delivered = 0;
    for (const auto& r : run->trace) {
      if (r.kind != TraceKind::Deliver) continue;
      ++delivered;
      EXPECT_TRUE(r.cls.is_benign()) << "packet " << r.packet_id << " of class " << r.cls.to_string();
    }
    EXPECT_GT(delivered, 0U);
  }
}

TEST(Network, WithoutSecurityThreatsAreOnlyLostToQueues) {
  const auto& run = runs().no_security;
  std::uint64_t threats = 0, unauthorized = 0;
  for (const auto& r : run.trace) {
    if (r.cls.is_benign()) continue;
    if (r.kind == TraceKind::Emit) ++(r.cls.is_threat() ? threats : unauthorized);
    EXPECT_NE(r.kind, TraceKind::Block);
    EXPECT_NE(r.kind, TraceKind::IngressDrop);
    EXPECT_NE(r.kind, TraceKind::RuleInstalled);
  }
  ASSERT_GT(threats, 0U);
  const auto& c = run.report.run.counters;
  EXPECT_EQ(c.threat_packets, threats);
  EXPECT_EQ(c.unauthorized_attempts, unauthorized);
  EXPECT_EQ(metrics::tdr(c).value(), 0.0);
}

TEST(Network, BlockedFlowsDeliverNothingUntilTheRuleExpires) {
  using Flow = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  for (const auto* run : {&runs().vnfsdn, &runs().vnfsdn_firewall}) {
    std::map<Flow, std::vector<std::pair<std::uint64_t, std::uint64_t>>> blocked;
    std::map<Flow, std::uint64_t> open;
    for (const auto& r : run->trace) {
      Flow f{r.src.index, r.dst.index, r.tag};
      if (r.kind == TraceKind::RuleInstalled) {
        ASSERT_FALSE(open.contains(f)) << "second live rule for one flow";
        open[f] = r.time_us;
      } else if (r.kind == TraceKind::RuleExpired) {
        ASSERT_TRUE(open.contains(f));
        blocked[f].emplace_back(open[f], r.time_us);
        open.erase(f);
      }
    }
    for (const auto& [f, t] : open) blocked[f].emplace_back(t, UINT64_MAX);
    ASSERT_FALSE(blocked.empty());

    std::uint64_t dropped_at_ingress = 0;
    for (const auto& r : run->trace) {
      auto it = blocked.find(Flow{r.src.index, r.dst.index, r.tag});
      if (it == blocked.end()) continue;
      for (auto [on, off] : it->second) {
        if (r.created_us < on || r.created_us >= off) continue;
        EXPECT_NE(r.kind, TraceKind::Deliver) << "packet " << r.packet_id << " slipped past a live drop rule";
        EXPECT_NE(r.kind, TraceKind::ChainService) << "packet " << r.packet_id << " reached the chain";
        dropped_at_ingress += r.kind == TraceKind::IngressDrop;
      }
    }
    EXPECT_GT(dropped_at_ingress, 0U);
  }
}

TEST(Network, CaptureSeesEveryPacketPresentedToTheChain) {
  const auto& run = runs().vnfsdn;
  ASSERT_TRUE(run.capture_file);
  auto file = dataplane::read_capture_file(*run.capture_file);
  EXPECT_EQ(file.records.size(), run.chain_presented);
  std::uint64_t served = 0;
  std::multiset<std::uint64_t> blocked_in_trace, blocked_in_file;
  for (const auto& r : run.trace) {
    served += r.kind == TraceKind::ChainService;
    if (r.kind == TraceKind::Block) blocked_in_trace.insert(r.packet_id);
  }
  for (const auto& c : file.records) {
    if (c.verdict.is_block()) blocked_in_file.insert(c.id);
  }
  EXPECT_EQ(served, run.chain_presented);
  EXPECT_EQ(blocked_in_file, blocked_in_trace);
  EXPECT_FALSE(runs().no_security.capture_file);
}

TEST(Network, ZeroAttackRateLeavesBenignDeliveryUnchanged) {
  auto cfg = load_config(1, std::nullopt,
                         {"duration_s=15", "traffic.ddos.0.rate_multiplier=0", "traffic.ddos.1.rate_multiplier=0"});
  auto a = run_single(cfg, "no_security");
  auto b = run_single(cfg, "vnfsdn");
  EXPECT_EQ(a.report.run.counters.threat_packets, 0U);
  EXPECT_EQ(a.report.run.benign_sent, b.report.run.benign_sent);
  EXPECT_EQ(a.report.run.benign_delivered, b.report.run.benign_delivered);
  EXPECT_EQ(a.report.run.benign_loss, b.report.run.benign_loss);
  EXPECT_EQ(a.report.run.availability_pct, b.report.run.availability_pct);
  EXPECT_EQ(a.report.run.availability_min_pct, b.report.run.availability_min_pct);
  EXPECT_FALSE(metrics::tdr(b.report.run.counters).defined());
}

}  // namespace
}  // namespace vnfsdn::scenario
