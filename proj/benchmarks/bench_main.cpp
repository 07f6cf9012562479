#include <benchmark/benchmark.h>

#include <memory>

#include "vnfsdn/control/controller.hpp"
#include "vnfsdn/dataplane/vnf.hpp"
#include "vnfsdn/metrics/analytic.hpp"
#include "vnfsdn/metrics/kpi.hpp"
#include "vnfsdn/scenario/config.hpp"
#include "vnfsdn/scenario/runner.hpp"
#include "vnfsdn/sim/engine.hpp"

using namespace vnfsdn;

static void BM_EngineScheduleAndRun(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    sim::Engine e;
    std::uint64_t seen = 0;
    e.on(sim::EventKind::PacketArrival, [&](const sim::Event&) { ++seen; });
    for (std::uint64_t i = 0; i < n; ++i) e.schedule(SimTime{(i * 7919) % n}, sim::EventKind::PacketArrival);
    e.run_until(SimTime{n});
    benchmark::DoNotOptimize(seen);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EngineScheduleAndRun)->Arg(1 << 12)->Arg(1 << 16);

static void BM_ComputeRoute(benchmark::State& state) {
  auto t = build_topology(TopologySpec::tree(static_cast<std::uint32_t>(state.range(0)), 8));
  auto hosts = t.nodes_of(NodeKind::UeHost);
  NodeId server = t.nodes_of(NodeKind::Server).front();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(control::compute_route(t, hosts[i++ % hosts.size()], server));
  }
}
BENCHMARK(BM_ComputeRoute)->Arg(4)->Arg(32);

static void BM_ChainProcess(benchmark::State& state) {
  dataplane::VnfChain chain;
  dataplane::FilterVnf f;
  f.policy = std::make_shared<SecurityPolicy>(SecurityPolicy::of({"benign"}));
  dataplane::IdsVnf ids;
  ids.signatures = {ThreatKind::SynFlood};
  ids.anomaly_threshold_pps = 5000;
  dataplane::FirewallVnf fw;
  chain.vnfs = {f, ids, fw};
  Packet p;
  p.size = 500;
  p.tag = SecurityTag("benign");
  std::uint64_t t = 0;
  for (auto _ : state) {
    p.src = NodeId{static_cast<std::uint32_t>(t % 16)};
    benchmark::DoNotOptimize(dataplane::chain_process(chain, p, SimTime{t}));
    t += 50;
  }
}
BENCHMARK(BM_ChainProcess);

static void BM_KpiRollup(benchmark::State& state) {
  std::vector<metrics::TraceRecord> trace;
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (std::uint64_t i = 0; i < n; ++i) {
    metrics::TraceRecord r;
    r.kind = i % 2 ? metrics::TraceKind::Deliver : metrics::TraceKind::Emit;
    r.created_us = (i / 2) * 100;
    r.time_us = r.created_us + (i % 2) * (1000 + i % 300);
    r.size = 800;
    trace.push_back(r);
  }
  metrics::KpiSettings s;
  s.windows = static_cast<std::uint32_t>(n * 50 / 1'000'000 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::kpi_rollup(trace, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KpiRollup)->Arg(1 << 16)->Arg(1 << 20);

static void BM_SecurityIntegral(benchmark::State& state) {
  metrics::AnalyticParams p;
  p.n = 16;
  p.gamma_n = 0.4;
  p.horizon_s = 20;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::security_integral(p));
}
BENCHMARK(BM_SecurityIntegral);

static void BM_Scenario4Vnfsdn(benchmark::State& state) {
  auto cfg = scenario::load_config(4, std::nullopt, {"duration_s=5"});
  for (auto _ : state) benchmark::DoNotOptimize(scenario::run_single(cfg, "vnfsdn"));
}
BENCHMARK(BM_Scenario4Vnfsdn)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
