#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace vnfsdn::metrics {

enum class MetricError : std::uint8_t { EmptyTraffic, NoThreats, NoAttempts, NoDevices, ZeroWindow };

std::string_view to_string(MetricError e);

class UndefinedMetric : public std::domain_error {
 public:
  explicit UndefinedMetric(MetricError e) : std::domain_error(std::string(to_string(e))), error_(e) {}
  MetricError error() const { return error_; }

 private:
  MetricError error_;
};

/// A rate or percentage that is either a value or a typed "undefined".
/// Zero denominators never collapse to 0 or 1.
class Metric {
 public:
  static Metric of(double v) { return Metric(v); }
  static Metric undefined(MetricError e) { return Metric(e); }

  bool defined() const { return value_.has_value(); }
  /// Throws UndefinedMetric when undefined.
  double value() const {
    if (!value_) throw UndefinedMetric(error_);
    return *value_;
  }
  MetricError error() const { return error_; }
  std::optional<double> optional() const { return value_; }

 private:
  explicit Metric(double v) : value_(v) {}
  explicit Metric(MetricError e) : error_(e) {}
  std::optional<double> value_;
  MetricError error_ = MetricError::EmptyTraffic;
};

struct KpiCounters {
  std::uint64_t total_packets = 0;
  std::uint64_t blocked_packets = 0;
  std::uint64_t threat_packets = 0;
  std::uint64_t blocked_threat_packets = 0;
  std::uint64_t unauthorized_attempts = 0;
  std::uint64_t blocked_unauthorized = 0;
  std::uint64_t access_attempts = 0;   // A
  std::uint64_t failed_access = 0;     // F
  std::uint64_t devices_total = 0;     // NT
  std::uint64_t devices_affected = 0;  // devices reached by suspicious packets
  std::uint64_t uptime_us = 0;         // operational window
  std::uint64_t downtime_us = 0;

  /// Throws std::invalid_argument when a numerator exceeds its denominator.
  void check() const;
  bool operator==(const KpiCounters&) const = default;
};

/// (total - blocked) / total * 100. Blocking more traffic lowers this value.
Metric secure_traffic_pct(const KpiCounters& c);
/// blocked threats / threats
Metric tdr(const KpiCounters& c);
/// blocked unauthorized attempts / unauthorized attempts
Metric ubr(const KpiCounters& c);
/// (NT - affected) / NT
Metric er(const KpiCounters& c);
/// (A - F) / A
Metric fer(const KpiCounters& c);
/// (T - D) / T
Metric rr(const KpiCounters& c);

}  // namespace vnfsdn::metrics
