#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <vector>

#include "vnfsdn/metrics/formulas.hpp"
#include "vnfsdn/model/types.hpp"

namespace vnfsdn::metrics {

enum class TraceKind : std::uint8_t {
  Emit,          // packet created at its source
  Deliver,       // packet reached its destination
  QueueDrop,     // lost to a full port or chain buffer
  ChainService,  // chain finished a packet; value = cost in us
  Block,         // chain verdict Block
  IngressDrop,   // dropped at the ingress switch by a flow rule or ACL entry
  RuleInstalled, // drop rule becomes active; src/dst/tag give the flow
  RuleExpired,
  Rtt,           // response delivered; value = round trip in us, origin_us = request creation
  Monitored,     // packet observed by a monitoring point; weight set
};

std::string_view to_string(TraceKind k);

namespace trace_flag {
inline constexpr std::uint8_t kRequest = 1;
inline constexpr std::uint8_t kResponse = 2;
inline constexpr std::uint8_t kAccess = 4;
}  // namespace trace_flag

struct TraceRecord {
  TraceKind kind = TraceKind::Emit;
  std::uint64_t time_us = 0;
  std::uint64_t packet_id = 0;
  std::uint64_t created_us = 0;
  std::uint64_t origin_us = 0;
  std::uint64_t value = 0;
  double weight = 0.0;
  NodeId src;
  NodeId dst;
  std::uint32_t size = 0;
  std::uint32_t tag = 0;
  PacketClass cls = PacketClass::benign();
  std::uint8_t flags = 0;
  NodeId at;  // node where the record was produced

  bool operator==(const TraceRecord&) const = default;
};

class EmptyTrace : public std::invalid_argument {
 public:
  EmptyTrace() : std::invalid_argument("trace contains no records") {}
};

struct KpiSettings {
  std::uint64_t window_us = 1'000'000;
  std::uint32_t windows = 0;  // traffic duration / window_us
  std::uint64_t rto_us = 200'000;
  double downtime_threshold_pct = 95.0;
  std::uint64_t devices_total = 0;
  // memory model of the security functions
  double base_mb = 0.0;
  double kb_per_flow = 0.0;
  double kb_per_rule = 0.5;
};

struct WindowKpi {
  std::uint32_t index = 0;
  std::uint64_t start_us = 0;

  std::uint64_t benign_sent = 0;       // by creation time
  std::uint64_t benign_delivered = 0;  // by creation time
  std::uint64_t benign_lost = 0;       // by loss time
  std::uint64_t queue_drops = 0;       // all classes, by loss time
  std::uint64_t threats = 0;
  std::uint64_t threats_blocked = 0;
  std::uint64_t delivered_bits = 0;  // benign, by delivery time
  std::uint64_t exchanges = 0;
  std::uint64_t exchanges_completed = 0;

  std::optional<double> availability_pct;
  std::optional<double> latency_ms;
  std::optional<double> jitter_ms;
  double throughput_mbps = 0.0;
  double cpu_pct = 0.0;
  double memory_mb = 0.0;
  std::optional<double> tdr;
  std::optional<double> response_ms;  // mean exchange time, losses at the retransmission timeout
};

struct RunKpi {
  KpiCounters counters;
  std::uint64_t benign_sent = 0;
  std::uint64_t benign_delivered = 0;
  std::uint64_t benign_loss = 0;  // queue drops + blocked benign
  std::uint64_t queue_drops = 0;
  std::uint64_t delivered_packets = 0;
  std::optional<double> latency_ms;
  std::optional<double> jitter_ms;
  double throughput_mbps = 0.0;
  std::optional<double> availability_pct;  // mean over windows with traffic
  std::optional<double> availability_min_pct;
  std::optional<double> availability_max_pct;
  double cpu_pct = 0.0;
  double memory_mb = 0.0;
  double memory_peak_mb = 0.0;
  std::optional<double> detection_ms;  // mean over mitigated threat flows
  std::optional<double> rtt_ms;        // completed exchanges only
  std::optional<double> exchange_ms;   // losses at the retransmission timeout
  std::optional<double> response_ms;   // detection (0 when nothing mitigated) + exchange time
  std::uint64_t mitigated_flows = 0;
};

struct KpiReport {
  std::vector<WindowKpi> windows;
  RunKpi run;
};

/// Online window and run accumulator fed with trace records in production
/// order. Records of equal kind must arrive in time order.
class KpiAccumulator {
 public:
  explicit KpiAccumulator(KpiSettings settings);

  void add(const TraceRecord& r);
  std::uint64_t records() const { return records_; }
  KpiReport finish() const;

 private:
  struct Window {
    WindowKpi k;
    double latency_sum_us = 0.0;
    std::uint64_t latency_n = 0;
    double jitter_sum_us = 0.0;
    std::uint64_t jitter_n = 0;
    std::optional<std::uint64_t> last_latency;
    double busy_us = 0.0;
    double rtt_sum_us = 0.0;
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> flows;
  };
  using Flow = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

  Window& window_at(std::uint64_t t);
  void add_busy(std::uint64_t from, std::uint64_t to);

  KpiSettings s_;
  std::vector<Window> w_;
  std::uint64_t records_ = 0;
  KpiCounters c_;
  std::uint64_t benign_sent_ = 0;
  std::uint64_t benign_delivered_ = 0;
  std::uint64_t benign_loss_ = 0;
  std::uint64_t queue_drops_ = 0;
  std::uint64_t delivered_ = 0;
  std::set<std::uint32_t> affected_;
  std::map<Flow, std::uint64_t> threat_first_emit_;
  std::map<Flow, std::uint64_t> rule_at_;
  std::map<Flow, std::uint64_t> drop_at_;
  std::vector<std::pair<std::uint64_t, int>> rule_events_;
};

/// Full-trace rollup; same arithmetic as feeding an accumulator record by record.
KpiReport kpi_rollup(std::span<const TraceRecord> trace, const KpiSettings& settings);

}  // namespace vnfsdn::metrics
