#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "vnfsdn/model/topology.hpp"
#include "vnfsdn/model/types.hpp"

namespace vnfsdn {
namespace {

TEST(PacketClass, RoundTripsThroughText) {
  for (auto c : {PacketClass::benign(), PacketClass::unauthorized(), PacketClass::threat(ThreatKind::SynFlood),
                 PacketClass::threat(ThreatKind::UdpFlood), PacketClass::threat(ThreatKind::IcmpFlood),
                 PacketClass::threat(ThreatKind::PortScan)}) {
    EXPECT_EQ(PacketClass::parse(c.to_string()), c) << c.to_string();
  }
  EXPECT_EQ(PacketClass::threat(ThreatKind::IcmpFlood).to_string(), "Threat:IcmpFlood");
  EXPECT_THROW(PacketClass::parse("Threat:Teardrop"), std::invalid_argument);
}

TEST(SecurityTag, EqualityIsByName) {
  SecurityTag a("tag-a"), b("tag-a"), c("tag-c");
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.name(), "tag-a");
  auto policy = SecurityPolicy::of({"tag-a"});
  EXPECT_TRUE(policy.accepts(b));
  EXPECT_FALSE(policy.accepts(c));
}

TEST(Packet, CheckRejectsBadSizesAndTimes) {
  Packet p;
  p.size = 500;
  p.created_at = SimTime{10};
  EXPECT_NO_THROW(check_packet(p));
  p.size = kMinPacketSize - 1;
  EXPECT_THROW(check_packet(p), std::invalid_argument);
  p.size = kMaxPacketSize + 1;
  EXPECT_THROW(check_packet(p), std::invalid_argument);
  p.size = 500;
  p.delivered_at = SimTime{9};
  EXPECT_THROW(check_packet(p), std::invalid_argument);
}

TEST(SimTime, ConvertsUnits) {
  EXPECT_EQ(SimTime::from_seconds(1.5).us, 1'500'000U);
  EXPECT_EQ(SimTime::from_ms(0.25).us, 250U);
  EXPECT_DOUBLE_EQ(SimTime{2'500}.ms(), 2.5);
}

TEST(Topology, StarUsesDeclarationOrder) {
  auto t = build_topology(TopologySpec::star(3));
  ASSERT_EQ(t.node_count(), 6U);
  EXPECT_EQ(t.kind(NodeId{0}), NodeKind::UeHost);
  EXPECT_EQ(t.kind(NodeId{2}), NodeKind::UeHost);
  EXPECT_EQ(t.kind(NodeId{3}), NodeKind::Switch);
  EXPECT_EQ(t.kind(NodeId{4}), NodeKind::Server);
  EXPECT_EQ(t.controller(), NodeId{5});
  EXPECT_TRUE(validate(t).empty());
}

TEST(Topology, BuildIsDeterministicAndValid) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 50; ++i) {
    TopologySpec s;
    s.shape = i % 2 ? TopologySpec::Shape::Tree : TopologySpec::Shape::Star;
    s.routers = s.shape == TopologySpec::Shape::Tree ? 1 + static_cast<std::uint32_t>(gen() % 4) : 0;
    s.hosts = std::max(s.routers, 1U) * (1 + static_cast<std::uint32_t>(gen() % 8));
    s.servers = 1 + static_cast<std::uint32_t>(gen() % 2);
    s.vnf_host = gen() % 2;
    s.host_latency_spread_us = gen() % 1000;
    auto a = build_topology(s);
    auto b = build_topology(s);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(validate(a).empty());
  }
  auto two = TopologySpec::star(4);
  two.switches = 2;
  EXPECT_THROW(build_topology(two), TopologyError);
  auto uneven = TopologySpec::tree(3, 2);
  uneven.hosts = 7;
  EXPECT_THROW(build_topology(uneven), TopologyError);
}

TEST(Topology, HostLatencySpreadIsLinear) {
  auto s = TopologySpec::star(5);
  s.host_link.latency_us = 1000;
  s.host_latency_spread_us = 400;
  auto t = build_topology(s);
  for (std::uint32_t h = 0; h < 5; ++h) {
    auto sw = t.nodes_of(NodeKind::Switch).front();
    auto l = t.link_between(NodeId{h}, sw);
    ASSERT_TRUE(l);
    EXPECT_EQ(t.link(*l).latency_us, 1000 + 100 * h);
  }
}

TEST(Topology, ValidateReportsEachViolation) {
  using K = NodeKind;
  auto link = [](std::uint32_t a, std::uint32_t b) { return Link{NodeId{a}, NodeId{b}, 10, 1000, 5}; };

  EXPECT_EQ(validate(std::vector<NodeKind>{}, std::vector<Link>{}), std::vector<Violation>{Violation::Empty});

  std::vector<NodeKind> two_ctrl{K::ControllerNode, K::ControllerNode};
  auto v = validate(two_ctrl, std::vector<Link>{link(0, 1)});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::DuplicateController), v.end());

  std::vector<NodeKind> no_ctrl{K::UeHost, K::Switch};
  v = validate(no_ctrl, std::vector<Link>{link(0, 1)});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::MissingController), v.end());

  std::vector<NodeKind> split{K::UeHost, K::Switch, K::ControllerNode};
  v = validate(split, std::vector<Link>{link(0, 1)});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::DisconnectedGraph), v.end());

  std::vector<NodeKind> ok{K::UeHost, K::ControllerNode};
  v = validate(ok, std::vector<Link>{link(0, 0), link(0, 1)});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::InvalidLink), v.end());
  v = validate(ok, std::vector<Link>{Link{NodeId{0}, NodeId{1}, 0, 1000, 5}});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::InvalidLink), v.end());
  v = validate(ok, std::vector<Link>{link(0, 7)});
  EXPECT_NE(std::find(v.begin(), v.end(), Violation::InvalidLink), v.end());

  EXPECT_THROW(Topology(split, {link(0, 1)}), TopologyError);
  try {
    (void)Topology(two_ctrl, {link(0, 1)});
    FAIL();
  } catch (const TopologyError& e) {
    EXPECT_EQ(e.violation(), Violation::DuplicateController);
  }
}

TEST(Topology, RandomGraphsFromTheGeneratorAreValid) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    auto t = oracle::random_topology(gen, 8);
    EXPECT_TRUE(validate(t).empty());
  }
}

}  // namespace
}  // namespace vnfsdn
