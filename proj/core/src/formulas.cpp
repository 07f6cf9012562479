#include "vnfsdn/metrics/formulas.hpp"

#include <string>

namespace vnfsdn::metrics {

std::string_view to_string(MetricError e) {
  switch (e) {
    case MetricError::EmptyTraffic: return "EmptyTraffic";
    case MetricError::NoThreats: return "NoThreats";
    case MetricError::NoAttempts: return "NoAttempts";
    case MetricError::NoDevices: return "NoDevices";
    case MetricError::ZeroWindow: return "ZeroWindow";
  }
  return "?";
}

void KpiCounters::check() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("counter invariant violated: ") + what);
  };
  require(blocked_packets <= total_packets, "blocked <= total");
  require(blocked_threat_packets <= threat_packets, "blocked_threat <= threat");
  require(blocked_unauthorized <= unauthorized_attempts, "blocked_unauthorized <= unauthorized");
  require(failed_access <= access_attempts, "failed_access <= access_attempts");
  require(devices_affected <= devices_total, "devices_affected <= devices_total");
  require(downtime_us <= uptime_us, "downtime <= uptime");
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) { return static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

Metric secure_traffic_pct(const KpiCounters& c) {
  c.check();
  if (c.total_packets == 0) return Metric::undefined(MetricError::EmptyTraffic);
  return Metric::of(ratio(c.total_packets - c.blocked_packets, c.total_packets) * 100.0);
}

Metric tdr(const KpiCounters& c) {
  c.check();
  if (c.threat_packets == 0) return Metric::undefined(MetricError::NoThreats);
  return Metric::of(ratio(c.blocked_threat_packets, c.threat_packets));
}

Metric ubr(const KpiCounters& c) {
  c.check();
  if (c.unauthorized_attempts == 0) return Metric::undefined(MetricError::NoAttempts);
  return Metric::of(ratio(c.blocked_unauthorized, c.unauthorized_attempts));
}

Metric er(const KpiCounters& c) {
  c.check();
  if (c.devices_total == 0) return Metric::undefined(MetricError::NoDevices);
  return Metric::of(ratio(c.devices_total - c.devices_affected, c.devices_total));
}

Metric fer(const KpiCounters& c) {
  c.check();
  if (c.access_attempts == 0) return Metric::undefined(MetricError::NoAttempts);
  return Metric::of(ratio(c.access_attempts - c.failed_access, c.access_attempts));
}

Metric rr(const KpiCounters& c) {
  c.check();
  if (c.uptime_us == 0) return Metric::undefined(MetricError::ZeroWindow);
  return Metric::of(ratio(c.uptime_us - c.downtime_us, c.uptime_us));
}

}  // namespace vnfsdn::metrics
