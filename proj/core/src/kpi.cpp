#include "vnfsdn/metrics/kpi.hpp"

#include <algorithm>
#include <cstdlib>

namespace vnfsdn::metrics {

std::string_view to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Emit: return "Emit";
    case TraceKind::Deliver: return "Deliver";
    case TraceKind::QueueDrop: return "QueueDrop";
    case TraceKind::ChainService: return "ChainService";
    case TraceKind::Block: return "Block";
    case TraceKind::IngressDrop: return "IngressDrop";
    case TraceKind::RuleInstalled: return "RuleInstalled";
    case TraceKind::RuleExpired: return "RuleExpired";
    case TraceKind::Rtt: return "Rtt";
    case TraceKind::Monitored: return "Monitored";
  }
  return "?";
}

KpiAccumulator::KpiAccumulator(KpiSettings settings) : s_(settings) {
  if (s_.window_us == 0) throw std::invalid_argument("window width must be positive");
  if (s_.windows == 0) throw std::invalid_argument("at least one window is required");
  w_.resize(s_.windows);
  for (std::uint32_t i = 0; i < s_.windows; ++i) {
    w_[i].k.index = i;
    w_[i].k.start_us = i * s_.window_us;
  }
}

KpiAccumulator::Window& KpiAccumulator::window_at(std::uint64_t t) {
  std::uint64_t i = std::min<std::uint64_t>(t / s_.window_us, s_.windows - 1);
  return w_[i];
}

void KpiAccumulator::add_busy(std::uint64_t from, std::uint64_t to) {
  while (from < to) {
    std::uint64_t i = std::min<std::uint64_t>(from / s_.window_us, s_.windows - 1);
    std::uint64_t end = i + 1 == s_.windows ? to : std::min(to, (i + 1) * s_.window_us);
    w_[i].busy_us += static_cast<double>(end - from);
    from = end;
  }
}

void KpiAccumulator::add(const TraceRecord& r) {
  ++records_;
  const bool access = r.flags & trace_flag::kAccess;
  const bool benign = r.cls.is_benign() && !access;
  const Flow flow{r.src.index, r.dst.index, r.tag};

  switch (r.kind) {
    case TraceKind::Emit: {
      ++c_.total_packets;
      if (access) ++c_.access_attempts;
      if (r.cls.is_unauthorized()) ++c_.unauthorized_attempts;
      if (r.cls.is_threat()) {
        ++c_.threat_packets;
        ++window_at(r.created_us).k.threats;
        threat_first_emit_.try_emplace(flow, r.created_us);
      }
      if (benign) {
        ++benign_sent_;
        auto& w = window_at(r.created_us);
        ++w.k.benign_sent;
        if (r.flags & trace_flag::kRequest) ++w.k.exchanges;
      }
      break;
    }
    case TraceKind::Deliver: {
      ++delivered_;
      if (!r.cls.is_benign()) affected_.insert(r.dst.index);
      if (benign) {
        ++benign_delivered_;
        ++window_at(r.created_us).k.benign_delivered;
        auto& w = window_at(r.time_us);
        std::uint64_t latency = r.time_us - r.created_us;
        w.latency_sum_us += static_cast<double>(latency);
        ++w.latency_n;
        if (w.last_latency) {
          w.jitter_sum_us += static_cast<double>(latency > *w.last_latency ? latency - *w.last_latency
                                                                          : *w.last_latency - latency);
          ++w.jitter_n;
        }
        w.last_latency = latency;
        w.k.delivered_bits += std::uint64_t{r.size} * 8;
      }
      break;
    }
    case TraceKind::QueueDrop: {
      ++queue_drops_;
      ++window_at(r.time_us).k.queue_drops;
      if (access) ++c_.failed_access;
      if (benign) {
        ++benign_loss_;
        ++window_at(r.time_us).k.benign_lost;
      }
      break;
    }
    case TraceKind::Block:
    case TraceKind::IngressDrop: {
      ++c_.blocked_packets;
      if (r.cls.is_threat()) {
        ++c_.blocked_threat_packets;
        ++window_at(r.created_us).k.threats_blocked;
        drop_at_.try_emplace(flow, r.time_us);
      }
      if (r.cls.is_unauthorized()) ++c_.blocked_unauthorized;
      if (access) ++c_.failed_access;
      if (benign) {
        ++benign_loss_;
        ++window_at(r.time_us).k.benign_lost;
      }
      break;
    }
    case TraceKind::ChainService: {
      auto& w = window_at(r.time_us);
      w.flows.insert(flow);
      add_busy(r.time_us - std::min(r.value, r.time_us), r.time_us);
      break;
    }
    case TraceKind::RuleInstalled: {
      rule_events_.emplace_back(r.time_us, +1);
      auto [it, fresh] = rule_at_.try_emplace(flow, r.time_us);
      if (!fresh) it->second = std::min(it->second, r.time_us);
      break;
    }
    case TraceKind::RuleExpired:
      rule_events_.emplace_back(r.time_us, -1);
      break;
    case TraceKind::Rtt: {
      auto& w = window_at(r.origin_us);
      ++w.k.exchanges_completed;
      w.rtt_sum_us += static_cast<double>(r.value);
      break;
    }
    case TraceKind::Monitored:
      break;
  }
}

KpiReport KpiAccumulator::finish() const {
  KpiReport out;
  RunKpi& run = out.run;

  auto events = rule_events_;
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t next_event = 0;
  long long active_rules = 0;

  double lat_sum = 0.0;
  std::uint64_t lat_n = 0;
  double jit_sum = 0.0;
  std::uint64_t jit_n = 0;
  std::uint64_t bits = 0;
  double avail_sum = 0.0;
  std::uint64_t avail_n = 0;
  double cpu_sum = 0.0;
  double mem_sum = 0.0;
  std::uint64_t exchanges = 0;
  std::uint64_t completed = 0;
  double rtt_sum = 0.0;
  std::uint64_t downtime = 0;

  for (const auto& win : w_) {
    WindowKpi k = win.k;
    std::uint64_t end = k.start_us + s_.window_us;
    while (next_event < events.size() && events[next_event].first < end) active_rules += events[next_event++].second;

    if (k.benign_sent > 0) {
      k.availability_pct = std::min(100.0, 100.0 * static_cast<double>(k.benign_delivered) /
                                               static_cast<double>(k.benign_sent));
      avail_sum += *k.availability_pct;
      ++avail_n;
      run.availability_min_pct = std::min(run.availability_min_pct.value_or(*k.availability_pct), *k.availability_pct);
      run.availability_max_pct = std::max(run.availability_max_pct.value_or(*k.availability_pct), *k.availability_pct);
      if (*k.availability_pct < s_.downtime_threshold_pct) downtime += s_.window_us;
    }
    if (win.latency_n > 0) k.latency_ms = win.latency_sum_us / static_cast<double>(win.latency_n) / 1000.0;
    if (win.jitter_n > 0) k.jitter_ms = win.jitter_sum_us / static_cast<double>(win.jitter_n) / 1000.0;
    k.throughput_mbps = static_cast<double>(k.delivered_bits) / static_cast<double>(s_.window_us);
    k.cpu_pct = 100.0 * win.busy_us / static_cast<double>(s_.window_us);
    k.memory_mb = s_.base_mb + static_cast<double>(win.flows.size()) * s_.kb_per_flow / 1024.0 +
                  static_cast<double>(std::max(0LL, active_rules)) * s_.kb_per_rule / 1024.0;
    if (k.threats > 0) k.tdr = static_cast<double>(k.threats_blocked) / static_cast<double>(k.threats);
    if (k.exchanges > 0) {
      double lost = static_cast<double>(k.exchanges - std::min(k.exchanges, k.exchanges_completed));
      k.response_ms = (win.rtt_sum_us + lost * static_cast<double>(s_.rto_us)) / static_cast<double>(k.exchanges) / 1000.0;
    }

    lat_sum += win.latency_sum_us;
    lat_n += win.latency_n;
    jit_sum += win.jitter_sum_us;
    jit_n += win.jitter_n;
    bits += k.delivered_bits;
    cpu_sum += k.cpu_pct;
    mem_sum += k.memory_mb;
    run.memory_peak_mb = std::max(run.memory_peak_mb, k.memory_mb);
    exchanges += k.exchanges;
    completed += k.exchanges_completed;
    rtt_sum += win.rtt_sum_us;
    out.windows.push_back(k);
  }

  const double n_windows = static_cast<double>(w_.size());
  run.counters = c_;
  run.counters.devices_total = s_.devices_total;
  run.counters.devices_affected = std::min<std::uint64_t>(affected_.size(), s_.devices_total);
  run.counters.uptime_us = s_.window_us * w_.size();
  run.counters.downtime_us = downtime;
  run.benign_sent = benign_sent_;
  run.benign_delivered = benign_delivered_;
  run.benign_loss = benign_loss_;
  run.queue_drops = queue_drops_;
  run.delivered_packets = delivered_;
  if (lat_n > 0) run.latency_ms = lat_sum / static_cast<double>(lat_n) / 1000.0;
  if (jit_n > 0) run.jitter_ms = jit_sum / static_cast<double>(jit_n) / 1000.0;
  run.throughput_mbps = static_cast<double>(bits) / (n_windows * static_cast<double>(s_.window_us));
  if (avail_n > 0) run.availability_pct = avail_sum / static_cast<double>(avail_n);
  run.cpu_pct = cpu_sum / n_windows;
  run.memory_mb = mem_sum / n_windows;

  double det_sum = 0.0;
  for (const auto& [flow, first] : threat_first_emit_) {
    std::optional<std::uint64_t> at;
    if (auto it = rule_at_.find(flow); it != rule_at_.end()) {
      at = it->second;
    } else if (auto d = drop_at_.find(flow); d != drop_at_.end()) {
      at = d->second;
    }
    if (!at || *at < first) continue;
    det_sum += static_cast<double>(*at - first);
    ++run.mitigated_flows;
  }
  if (run.mitigated_flows > 0) run.detection_ms = det_sum / static_cast<double>(run.mitigated_flows) / 1000.0;
  if (completed > 0) run.rtt_ms = rtt_sum / static_cast<double>(completed) / 1000.0;
  if (exchanges > 0) {
    double lost = static_cast<double>(exchanges - std::min(exchanges, completed));
    run.exchange_ms = (rtt_sum + lost * static_cast<double>(s_.rto_us)) / static_cast<double>(exchanges) / 1000.0;
    run.response_ms = *run.exchange_ms + run.detection_ms.value_or(0.0);
  }
  return out;
}

KpiReport kpi_rollup(std::span<const TraceRecord> trace, const KpiSettings& settings) {
  if (trace.empty()) throw EmptyTrace();
  KpiAccumulator acc(settings);
  for (const auto& r : trace) acc.add(r);
  return acc.finish();
}

}  // namespace vnfsdn::metrics
