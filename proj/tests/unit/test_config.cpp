#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/runner.hpp"

namespace vnfsdn::scenario {
namespace {

namespace fs = std::filesystem;

fs::path write_file(const std::string& name, const std::string& text) {
  auto p = fs::temp_directory_path() / ("vnfsdn_config_" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

TEST(Config, EveryScenarioLoadsWithDefaults) {
  for (int s = 1; s <= kScenarioCount; ++s) {
    auto c = load_config(s);
    EXPECT_EQ(c.scenario, s);
    EXPECT_EQ(c.digest.size(), 16U);
    EXPECT_FALSE(c.configs.empty());
    for (const auto& name : c.configs) EXPECT_NO_THROW(mode_of(name));
  }
  EXPECT_ANY_THROW(load_config(7));
}

TEST(Config, ShippedFilesMatchTheDefaults) {
  for (int s = 1; s <= kScenarioCount; ++s) {
    auto file = fs::path(VNFSDN_CONFIG_DIR) / ("scenario" + std::to_string(s) + ".json");
    EXPECT_EQ(load_config(s, file).digest, load_config(s).digest) << file;
  }
}

TEST(Config, DigestTracksTheMergedTree) {
  auto a = load_config(4);
  auto b = load_config(4);
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_EQ(a.canonical, b.canonical);
  auto c = load_config(4, std::nullopt, {"seed=2"});
  EXPECT_NE(a.digest, c.digest);
  EXPECT_EQ(c.seed, 2U);
}

TEST(Config, OverridesReachNestedAndListValues) {
  auto c = load_config(1, std::nullopt,
                       {"duration_s=30", "topology.hosts=12", "traffic.ddos.1.rate_multiplier=0.5",
                        "security.ids.anomaly_threshold_pps=123", "traffic.benign.tag=\"benign\""});
  EXPECT_EQ(c.duration_s, 30.0);
  EXPECT_EQ(c.topology.hosts, 12U);
  ASSERT_EQ(c.ddos.size(), 2U);
  EXPECT_EQ(c.ddos[1].rate_multiplier, 0.5);
  EXPECT_EQ(c.security.ids.anomaly_threshold_pps, 123.0);
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(load_config(1, std::nullopt, {"no.such.key=1"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"traffic.ddos.9.rate_multiplier=1"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"traffic.ddos.x.rate_multiplier=1"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"missing_equals"}), ConfigError);
  auto file = write_file("unknown", R"({"topology": {"hosts": 4, "colour": "red"}})");
  EXPECT_THROW(load_config(1, file), ConfigError);
  auto broken = write_file("broken", "{ not json");
  EXPECT_THROW(load_config(1, broken), ConfigError);
  EXPECT_THROW(load_config(1, fs::path("/nonexistent/x.json")), ConfigError);
}

TEST(Config, FileMergesOverDefaults) {
  auto file = write_file("merge", R"({"scenario": 5, "seed": 9, "topology": {"hosts": 6}})");
  auto c = load_config(5, file);
  EXPECT_EQ(c.seed, 9U);
  EXPECT_EQ(c.topology.hosts, 6U);
  EXPECT_EQ(c.duration_s, load_config(5).duration_s);
}

TEST(Config, ScenarioMismatchIsItsOwnError) {
  auto file = write_file("mismatch", R"({"scenario": 2})");
  EXPECT_THROW(load_config(3, file), ConfigMismatch);
  EXPECT_THROW(load_config(3, std::nullopt, {"scenario=4"}), ConfigMismatch);
  EXPECT_THROW(load_config(3, std::nullopt, {"configs=[\"vnfsdn\", \"made_up\"]"}), ConfigMismatch);
}

TEST(Config, RangeChecks) {
  EXPECT_THROW(load_config(1, std::nullopt, {"duration_s=0"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"duration_s=0.5"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"traffic.ddos.0.start_s=200"}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"security.capture.ap_mac=\"nope\""}), ConfigError);
  EXPECT_THROW(load_config(1, std::nullopt, {"configs=[]"}), ConfigError);
  EXPECT_THROW(load_config(3, std::nullopt, {"monitor.routers=[1, 2]"}), ConfigError);
}

TEST(NodeRef, ParseAndResolve) {
  auto r = NodeRef::parse("server:0");
  EXPECT_EQ(r.kind, NodeKind::Server);
  EXPECT_EQ(r.to_string(), "server:0");
  EXPECT_EQ(NodeRef::parse("host:12").index, 12U);
  EXPECT_THROW(NodeRef::parse("host"), std::invalid_argument);
  EXPECT_THROW(NodeRef::parse("toaster:1"), std::invalid_argument);
  EXPECT_THROW(NodeRef::parse("host:x"), std::invalid_argument);

  auto t = build_topology(TopologySpec::star(4, 1));
  EXPECT_EQ(NodeRef::parse("host:3").resolve(t), t.nodes_of(NodeKind::UeHost)[3]);
  EXPECT_EQ(NodeRef::parse("server:0").resolve(t), t.nodes_of(NodeKind::Server)[0]);
  EXPECT_THROW(NodeRef::parse("host:4").resolve(t), ConfigError);
}

TEST(DdosSpec, AttackerSelection) {
  auto t = build_topology(TopologySpec::star(5, 1));
  auto hosts = t.nodes_of(NodeKind::UeHost);
  DdosSpec d;
  d.target = NodeRef::parse("host:1");
  EXPECT_EQ(d.resolve_attackers(t), (std::vector<NodeId>{hosts[0], hosts[2], hosts[3], hosts[4]}));
  d.attackers = "count:2";
  EXPECT_EQ(d.resolve_attackers(t), (std::vector<NodeId>{hosts[0], hosts[2]}));
  d.attackers = "list:4,0";
  EXPECT_EQ(d.resolve_attackers(t), (std::vector<NodeId>{hosts[4], hosts[0]}));
  d.attackers = "list:1";
  EXPECT_THROW(d.resolve_attackers(t), ConfigError);
  d.attackers = "count:9";
  EXPECT_THROW(d.resolve_attackers(t), ConfigError);
  d.attackers = "everyone";
  EXPECT_THROW(d.resolve_attackers(t), ConfigError);
}

TEST(Config, DefaultTextRoundTrips) {
  for (int s = 1; s <= kScenarioCount; ++s) {
    auto file = write_file("defaults" + std::to_string(s), default_config_text(s));
    EXPECT_EQ(load_config(s, file).canonical, load_config(s).canonical);
  }
}

}  // namespace
}  // namespace vnfsdn::scenario
