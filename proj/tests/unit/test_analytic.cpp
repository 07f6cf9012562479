#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/runner.hpp"

namespace vnfsdn::metrics {
namespace {

AnalyticParams params(std::uint32_t n, double gamma, double m, double horizon, double a = 1.0) {
  AnalyticParams p;
  p.n = n;
  p.a_n = a;
  p.gamma_n = gamma;
  p.m = m;
  p.horizon_s = horizon;
  return p;
}

double adaptive(const AnalyticParams& p) {
  auto f = [&](double t) { return p.a_n * std::sqrt(s_n(p, t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, p.horizon_s, 20, 1e-13);
}

TEST(RouterModel, Examples) {
  EXPECT_DOUBLE_EQ(s_n(params(4, 0.5, 1, 1), 0.0), 2.0);
  EXPECT_DOUBLE_EQ(s_n(params(1, 0.0, 1, 1), 3.7), 1.0);
  // sin(2 * 3 * pi / 12) = 1
  EXPECT_NEAR(s_n(params(9, 0.2, 2, 1), std::numbers::pi / 12), 3.2, 1e-15);
}

TEST(SecurityIntegral, Examples) {
  EXPECT_NEAR(security_integral(params(16, 0.0, 1, 1)), 2.0, 1e-12);
  EXPECT_NEAR(security_integral(params(1, 0.0, 1, 5)), 5.0, 1e-12);
  auto p = params(4, 0.3, 1, 10);
  EXPECT_NEAR(security_integral(p), adaptive(p), 1e-6);
}

TEST(SecurityIntegral, ClosedFormWithoutOscillation) {
  for (std::uint32_t n : {1U, 2U, 4U, 9U, 16U, 100U}) {
    for (double horizon : {0.5, 1.0, 7.0}) {
      for (double a : {1.0, 2.5}) {
        double want = a * std::pow(static_cast<double>(n), 0.25) * horizon;
        EXPECT_NEAR(security_integral(params(n, 0.0, 1, horizon, a)) / want, 1.0, 1e-12);
      }
    }
  }
}

TEST(SecurityIntegral, AgreesWithAdaptiveQuadratureOnRandomParameters) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    auto n = 1 + static_cast<std::uint32_t>(gen() % 30);
    double gamma = 0.95 * std::sqrt(static_cast<double>(n)) * u(gen);
    auto p = params(n, gamma, 0.1 + 4.0 * u(gen), 0.5 + 30.0 * u(gen), 0.2 + 3.0 * u(gen));
    double got = security_integral(p);
    EXPECT_NEAR(got, adaptive(p), 1e-6 * std::max(1.0, got)) << "n=" << n << " gamma=" << gamma;
    long double fine = oracle::simpson_reference(p.n, p.a_n, p.gamma_n, p.m, p.horizon_s, 200'000);
    EXPECT_NEAR(got, static_cast<double>(fine), 1e-6 * std::max(1.0, got));
  }
}

TEST(SecurityIntegral, RejectsBadParameters) {
  EXPECT_THROW(security_integral(params(0, 0, 1, 1)), std::invalid_argument);
  EXPECT_THROW(security_integral(params(1, -0.1, 1, 1)), std::invalid_argument);
  EXPECT_THROW(security_integral(params(1, 0, 0, 1)), std::invalid_argument);
  EXPECT_THROW(security_integral(params(1, 0, 1, 0)), std::invalid_argument);
  EXPECT_THROW(security_integral(params(1, 0, 1, 1, 0.0)), std::invalid_argument);
  EXPECT_THROW(security_integral(params(1, 0, 1, 1), 3), std::invalid_argument);
  // gamma >= sqrt(n) lets S_n touch zero
  EXPECT_THROW(security_integral(params(4, 2.0, 1, 10)), NonPositiveIntegrand);
  EXPECT_THROW(security_integral(params(4, 3.0, 1, 10)), NonPositiveIntegrand);
}

TEST(Hypothesis1, ConstantModelGivesFourthRootGrowth) {
  std::vector<std::uint32_t> ns{1, 4, 9, 16};
  auto r = check_hypothesis1(params(1, 0, 1, 1), ns);
  ASSERT_EQ(r.rows.size(), 4U);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    EXPECT_NEAR(r.rows[i].integral / std::pow(static_cast<double>(ns[i]), 0.25), 1.0, 1e-8);
    EXPECT_EQ(r.rows[i].exceeds_single_router, i > 0);
  }
  EXPECT_TRUE(r.verdict);
}

TEST(Hypothesis1, SingleRouterIsVacuouslyTrue) {
  std::vector<std::uint32_t> ns{1};
  EXPECT_TRUE(check_hypothesis1(params(1, 0, 1, 1), ns).verdict);
}

TEST(Hypothesis1, ScaledOscillationHolds) {
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = 1; n <= 16; ++n) ns.push_back(n);
  auto r = check_hypothesis1(params(1, 0, 1, 20), ns, GammaRule{GammaRule::Mode::ScaledBySqrtN, 0.1});
  EXPECT_TRUE(r.verdict);
}

TEST(Hypothesis1, VerdictMatchesAFinerReference) {
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = 1; n <= 16; ++n) ns.push_back(n);
  auto base = params(1, 0, 3, 20);
  GammaRule rule{GammaRule::Mode::Fixed, 0.5};
  auto r = check_hypothesis1(base, ns, rule);

  bool verdict = true;
  long double prev = 0;
  for (auto n : ns) {
    // the default resolution is at least 10^4 panels, so 10^5 is ten times finer
    long double v = oracle::simpson_reference(n, 1.0L, 0.5L, 3.0L, 20.0L, 100'000);
    if (n > 1 && !(v > prev)) verdict = false;
    EXPECT_NEAR(r.rows[n - 1].integral, static_cast<double>(v), 1e-6);
    prev = v;
  }
  EXPECT_EQ(r.verdict, verdict);
}

TEST(Hypothesis1, CoefficientAppliesOnlyAboveOneRouter) {
  std::vector<std::uint32_t> ns{1, 2};
  auto r = check_hypothesis1(params(1, 0, 1, 1, 0.5), ns);
  EXPECT_NEAR(r.rows[0].integral, 1.0, 1e-12);
  EXPECT_NEAR(r.rows[1].integral, 0.5 * std::pow(2.0, 0.25), 1e-12);
  EXPECT_FALSE(r.verdict);
  std::vector<std::uint32_t> bad{2, 4};
  EXPECT_THROW(check_hypothesis1(params(1, 0, 1, 1), bad), std::invalid_argument);
  std::vector<std::uint32_t> dup{1, 4, 4};
  EXPECT_THROW(check_hypothesis1(params(1, 0, 1, 1), dup), std::invalid_argument);
}

TEST(MonitoredTraffic, Examples) {
  EXPECT_EQ(monitored_traffic(MonitorSample{}), 0.0);
  MonitorSample s;
  s.packets = {{1.0, 100.0}, {1.0, 200.0}, {2.0, 300.0}};
  EXPECT_EQ(monitored_traffic(s), 900.0);
  s.packets.push_back({0.0, 5.0});
  EXPECT_THROW(monitored_traffic(s), std::invalid_argument);
}

TEST(MonitoredTraffic, EqualsNaiveResummation) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    MonitorSample s;
    long double want = 0;
    for (auto k = gen() % 50; k > 0; --k) {
      double w = 1.0 + static_cast<double>(gen() % 3);
      double b = static_cast<double>(64 + gen() % 1437);
      s.packets.emplace_back(w, b);
      want += static_cast<long double>(w) * b;
    }
    EXPECT_EQ(monitored_traffic(s), static_cast<double>(want));
  }
}

MonitorSeries series(std::uint32_t n, const std::function<double(std::uint32_t)>& magnitude) {
  MonitorSeries s;
  s.n = n;
  for (std::uint64_t k = 0; k <= 10; ++k) {
    MonitorSample m;
    m.time = SimTime{k * 100'000};
    m.packets = {{1.0, magnitude(n)}};
    s.samples.push_back(m);
  }
  return s;
}

TEST(MonitorGrowth, Examples) {
  std::vector<MonitorSeries> constant{series(1, [](auto) { return 9.0; }), series(2, [](auto) { return 9.0; }),
                                      series(4, [](auto) { return 9.0; })};
  auto c = monitor_growth_check(constant, 1.0);
  EXPECT_TRUE(c.verdict);
  EXPECT_NEAR(c.integrals[0].second, 3.0, 1e-12);
  EXPECT_EQ(c.integrals[0].second, c.integrals[2].second);

  std::vector<MonitorSeries> linear{series(4, [](auto n) { return double(n); }),
                                    series(1, [](auto n) { return double(n); }),
                                    series(2, [](auto n) { return double(n); })};
  auto l = monitor_growth_check(linear, 1.0);
  EXPECT_TRUE(l.verdict);
  for (auto [n, v] : l.integrals) EXPECT_NEAR(v, std::sqrt(static_cast<double>(n)), 1e-12);
  EXPECT_EQ(l.integrals.front().first, 1U);

  std::vector<MonitorSeries> shrinking{series(1, [](auto n) { return 10.0 - n; }),
                                       series(2, [](auto n) { return 10.0 - n; }),
                                       series(4, [](auto n) { return 10.0 - n; })};
  EXPECT_FALSE(monitor_growth_check(shrinking, 1.0).verdict);

  std::vector<MonitorSeries> two{constant[0], constant[1]};
  EXPECT_THROW(monitor_growth_check(two, 1.0), InsufficientSeries);
}

// Rebuilds every sweep run with a trace observer and re-aggregates the
// Monitored records into samples by hand.
TEST(MonitorGrowth, SimulatedSweepMatchesTraceReaggregation) {
  auto cfg = scenario::load_config(3, std::nullopt, {"monitor.duration_s=3"});
  auto swept = scenario::run_monitor_sweep(cfg);
  ASSERT_EQ(swept.size(), 3U);
  const std::uint64_t interval = SimTime::from_ms(cfg.monitor.interval_ms).us;
  const std::uint64_t horizon = SimTime::from_seconds(cfg.monitor.duration_s).us;

  std::vector<std::pair<std::uint32_t, long double>> integrals;
  for (std::size_t i = 0; i < swept.size(); ++i) {
    auto routers = cfg.monitor.routers[i];
    auto spec = TopologySpec::tree(routers, cfg.monitor.hosts_per_router);
    spec.host_link = cfg.topology.host_link;
    spec.server_link = cfg.topology.server_link;
    spec.controller_link = cfg.topology.controller_link;
    spec.router_link = cfg.topology.router_link;
    Topology topo = build_topology(spec);
    sim::Engine engine;
    sim::RngRegistry rng(cfg.seed);
    scenario::NetworkOptions no;
    no.controller = cfg.controller;
    no.response_size = cfg.benign.response_size;
    no.server_delay_us = cfg.server_delay_us;
    no.monitor_points = topo.nodes_of(NodeKind::Router);
    no.monitor_interval_us = interval;
    no.weights = cfg.metrics.weights;
    KpiSettings k;
    k.window_us = 1'000'000;
    k.windows = static_cast<std::uint32_t>(horizon / k.window_us);
    scenario::Network net(topo, {}, no, engine, k);
    std::vector<TraceRecord> seen;
    net.observe([&](const TraceRecord& r) {
      if (r.kind == TraceKind::Monitored) seen.push_back(r);
    });
    traffic::TrafficGenerator gen(engine, rng, SimTime{horizon}, [&net](Packet p) { net.inject(std::move(p)); });
    net.attach(gen);
    auto hosts = topo.nodes_of(NodeKind::UeHost);
    for (auto h : hosts) gen.add_benign(cfg.benign, h, topo.nodes_of(NodeKind::Server), hosts);
    if (cfg.access.authorized_pps > 0.0 || cfg.access.unauthorized_pps > 0.0) {
      traffic::AccessProfile a;
      a.authorized_pps = cfg.access.authorized_pps;
      a.unauthorized_pps = cfg.access.unauthorized_pps;
      a.sources = hosts;
      a.target = topo.nodes_of(NodeKind::Server).front();
      a.authorized_tag = cfg.access.authorized_tag;
      a.unauthorized_tag = cfg.access.unauthorized_tag;
      a.size = cfg.access.size;
      gen.add_access(a);
    }
    engine.run_until(SimTime{horizon});
    ASSERT_FALSE(seen.empty());

    // bucket k collects records in ((k-1) * interval, k * interval]
    std::vector<long double> m(horizon / interval + 1, 0.0L);
    for (const auto& r : seen) {
      auto bucket = (r.time_us + interval - 1) / interval;
      if (bucket < m.size()) m[bucket] += static_cast<long double>(r.weight) * r.size;
    }
    long double integral = 0;
    for (std::size_t b = 1; b < m.size(); ++b) {
      integral += 0.5L * (std::sqrt(m[b]) + std::sqrt(m[b - 1])) * (static_cast<long double>(interval) / 1e6L);
    }
    integrals.emplace_back(routers, integral);

    // the sweep is a pure function of the configuration
    ASSERT_EQ(swept[i].samples.size(), net.monitor_samples().size());
    for (std::size_t s = 0; s < swept[i].samples.size(); ++s) {
      EXPECT_EQ(swept[i].samples[s].packets, net.monitor_samples()[s].packets);
    }
  }

  auto got = monitor_growth_check(swept, cfg.monitor.duration_s);
  bool verdict = true;
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    EXPECT_NEAR(got.integrals[i].second, static_cast<double>(integrals[i].second),
                1e-3 * static_cast<double>(integrals[i].second));
    if (i > 0 && integrals[i].second < integrals[i - 1].second) verdict = false;
  }
  EXPECT_EQ(got.verdict, verdict);
}

}  // namespace
}  // namespace vnfsdn::metrics
