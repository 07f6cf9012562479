#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code under test beyond its plain data types.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vnfsdn/control/controller.hpp"
#include "vnfsdn/metrics/formulas.hpp"
#include "vnfsdn/metrics/kpi.hpp"
#include "vnfsdn/model/topology.hpp"

namespace vnfsdn::oracle {

/// Cheapest simple path whose interior nodes are switches or routers, found by
/// enumerating every simple path. Among equal-cost paths the lexicographically
/// smallest node sequence wins. nullopt when no such path exists.
std::optional<control::Path> brute_force_route(const Topology& t, NodeId src, NodeId dst);

/// Sum of the cheapest link latency between consecutive nodes.
std::uint64_t brute_path_cost(const Topology& t, const control::Path& p);

/// Random connected topology with 3..max_nodes nodes, exactly one controller,
/// and random parallel links and latencies.
Topology random_topology(std::mt19937_64& gen, std::uint32_t max_nodes);

/// Counters that satisfy every KpiCounters invariant.
metrics::KpiCounters random_counters(std::mt19937_64& gen);

/// Ratios recomputed in long double from the raw integer counters.
struct FormulaValues {
  std::optional<long double> secure_traffic_pct, tdr, ubr, er, fer, rr;
};
FormulaValues recompute(const metrics::KpiCounters& c);

/// Result of a direct scan over a finished trace.
struct ScanWindow {
  std::uint64_t benign_sent = 0;
  std::uint64_t benign_delivered = 0;
  std::uint64_t benign_lost = 0;
  std::uint64_t threats = 0;
  std::uint64_t threats_blocked = 0;
  std::uint64_t delivered_bits = 0;
  std::vector<std::uint64_t> latencies_us;  // delivery order
  double busy_us = 0.0;
  std::optional<double> availability_pct;
  std::optional<double> latency_ms;
  std::optional<double> jitter_ms;
  double throughput_mbps = 0.0;
  double cpu_pct = 0.0;
};

struct ScanReport {
  std::vector<ScanWindow> windows;
  std::uint64_t total_packets = 0;
  std::uint64_t blocked_packets = 0;
  std::uint64_t threat_packets = 0;
  std::uint64_t blocked_threats = 0;
  std::uint64_t unauthorized = 0;
  std::uint64_t blocked_unauthorized = 0;
  std::uint64_t benign_sent = 0;
  std::uint64_t benign_delivered = 0;
  std::uint64_t benign_loss = 0;
  std::uint64_t queue_drops = 0;
  std::optional<double> latency_ms;
  std::optional<double> jitter_ms;
  std::optional<double> availability_mean_pct;
  std::optional<double> availability_min_pct;
  double throughput_mbps = 0.0;
};

/// Recomputes the traffic KPIs from the raw trace with its own bookkeeping.
ScanReport scan_trace(std::span<const metrics::TraceRecord> trace, std::uint64_t window_us, std::uint32_t windows);

/// Arrivals of one source, replayed against a brute-force sliding count.
/// Returns, per arrival, whether more than threshold_pps * window arrivals of
/// that source fall in (t - window, t].
std::vector<bool> anomaly_replay(std::span<const std::pair<std::uint32_t, std::uint64_t>> arrivals,
                                 std::uint64_t window_us, double threshold_pps);

/// Composite Simpson on n panels of a_n * sqrt(sqrt(n) + gamma * sin(m sqrt(n) t)), with
/// long double accumulation.
long double simpson_reference(std::uint32_t n, long double a, long double gamma, long double m, long double horizon,
                              std::uint64_t panels);

}  // namespace vnfsdn::oracle
