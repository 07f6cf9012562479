#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vnfsdn/model/types.hpp"

namespace vnfsdn::metrics {

class NonPositiveIntegrand : public std::domain_error {
 public:
  NonPositiveIntegrand() : std::domain_error("router security model reaches a non-positive value") {}
};

class InsufficientSeries : public std::invalid_argument {
 public:
  InsufficientSeries() : std::invalid_argument("growth check needs series for at least three router counts") {}
};

/// Router-security model S_n(t) = sqrt(n) + gamma_n * sin(m * sqrt(n) * t).
struct AnalyticParams {
  std::uint32_t n = 1;
  double a_n = 1.0;
  double gamma_n = 0.0;
  double m = 1.0;
  double horizon_s = 1.0;

  double omega() const;
  /// Throws std::invalid_argument for n < 1, a_n <= 0, gamma_n < 0, m <= 0 or horizon <= 0.
  void check() const;
};

double s_n(const AnalyticParams& p, double t);

/// Integral of a_n * sqrt(S_n(t)) over [0, T] by composite Simpson with at
/// least 10^4 panels (more when the oscillation is fast).
double security_integral(const AnalyticParams& p);

/// Same integral with an explicit even panel count.
double security_integral(const AnalyticParams& p, std::uint64_t panels);

struct GammaRule {
  enum class Mode : std::uint8_t { Fixed, ScaledBySqrtN };
  Mode mode = Mode::Fixed;
  double value = 0.0;

  double gamma_for(std::uint32_t n) const;
};

struct Hypothesis1Row {
  std::uint32_t n = 0;
  double integral = 0.0;
  bool exceeds_single_router = false;
};

struct Hypothesis1Result {
  std::vector<Hypothesis1Row> rows;
  bool verdict = false;  // strictly increasing in n
};

/// Evaluates the integral for each n (a_n applies for n > 1; the single-router
/// baseline uses no coefficient). n_list must be ascending and start at 1.
Hypothesis1Result check_hypothesis1(const AnalyticParams& base, std::span<const std::uint32_t> n_list,
                                    GammaRule gamma = {});

struct ClassWeights {
  double benign = 1.0;
  double threat = 2.0;
  double unauthorized = 2.0;

  double of(PacketClass c) const;
};

/// Monitored packets at one instant: (weight, magnitude in bytes) pairs.
struct MonitorSample {
  SimTime time;
  std::vector<std::pair<double, double>> packets;
};

/// Sum of weight * magnitude.
double monitored_traffic(const MonitorSample& s);

struct MonitorSeries {
  std::uint32_t n = 0;
  std::vector<MonitorSample> samples;  // time-ordered
};

struct GrowthResult {
  std::vector<std::pair<std::uint32_t, double>> integrals;  // (n, integral of sqrt(M_n))
  bool verdict = false;                                     // non-decreasing in n
};

/// Trapezoid integral of sqrt(M_n(t)) over the samples in [0, horizon].
GrowthResult monitor_growth_check(std::span<const MonitorSeries> runs, double horizon_s);

}  // namespace vnfsdn::metrics
