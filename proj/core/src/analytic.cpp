#include "vnfsdn/metrics/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vnfsdn::metrics {

double AnalyticParams::omega() const { return m * std::sqrt(static_cast<double>(n)); }

void AnalyticParams::check() const {
  if (n < 1) throw std::invalid_argument("router count must be >= 1");
  if (!(a_n > 0.0)) throw std::invalid_argument("a_n must be positive");
  if (!(gamma_n >= 0.0)) throw std::invalid_argument("gamma_n must be non-negative");
  if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be positive");
}

double s_n(const AnalyticParams& p, double t) {
  double root_n = std::sqrt(static_cast<double>(p.n));
  return root_n + p.gamma_n * std::sin(p.m * root_n * t);
}

double security_integral(const AnalyticParams& p, std::uint64_t panels) {
  p.check();
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("Simpson needs an even panel count");
  if (p.gamma_n >= std::sqrt(static_cast<double>(p.n))) throw NonPositiveIntegrand();

  const double h = p.horizon_s / static_cast<double>(panels);
  auto f = [&](std::uint64_t i) {
    double s = s_n(p, h * static_cast<double>(i));
    if (!(s > 0.0)) throw NonPositiveIntegrand();
    return std::sqrt(s);
  };
  double odd = 0.0;
  double even = 0.0;
  for (std::uint64_t i = 1; i < panels; ++i) (i % 2 ? odd : even) += f(i);
  double sum = f(0) + f(panels) + 4.0 * odd + 2.0 * even;
  return p.a_n * sum * h / 3.0;
}

double security_integral(const AnalyticParams& p) {
  p.check();
  // at least 10^4 panels and 200 panels per oscillation period
  double periods = p.omega() * p.horizon_s / (2.0 * std::numbers::pi);
  auto panels = std::max<std::uint64_t>(10'000, static_cast<std::uint64_t>(std::ceil(periods * 200.0)));
  panels += panels % 2;
  return security_integral(p, panels);
}

double GammaRule::gamma_for(std::uint32_t n) const {
  return mode == Mode::Fixed ? value : value * std::sqrt(static_cast<double>(n));
}

Hypothesis1Result check_hypothesis1(const AnalyticParams& base, std::span<const std::uint32_t> n_list,
                                    GammaRule gamma) {
  if (n_list.empty() || n_list.front() != 1) throw std::invalid_argument("router counts must start at 1");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw std::invalid_argument("router counts must be strictly ascending");
  }
  Hypothesis1Result out;
  for (auto n : n_list) {
    AnalyticParams p = base;
    p.n = n;
    p.gamma_n = gamma.gamma_for(n);
    if (n == 1) p.a_n = 1.0;
    out.rows.push_back(Hypothesis1Row{n, security_integral(p), false});
  }
  out.verdict = true;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    out.rows[i].exceeds_single_router = i > 0 && out.rows[i].integral > out.rows[0].integral;
    if (i > 0 && !(out.rows[i].integral > out.rows[i - 1].integral)) out.verdict = false;
  }
  return out;
}

double ClassWeights::of(PacketClass c) const {
  switch (c.kind()) {
    case PacketClass::Kind::Benign: return benign;
    case PacketClass::Kind::Threat: return threat;
    case PacketClass::Kind::UnauthorizedAccess: return unauthorized;
  }
  return benign;
}

double monitored_traffic(const MonitorSample& s) {
  double total = 0.0;
  for (const auto& [w, magnitude] : s.packets) {
    if (!(w > 0.0)) throw std::invalid_argument("monitor weights must be positive");
    total += w * magnitude;
  }
  return total;
}

GrowthResult monitor_growth_check(std::span<const MonitorSeries> runs, double horizon_s) {
  if (runs.size() < 3) throw InsufficientSeries();
  GrowthResult out;
  for (const auto& series : runs) {
    double integral = 0.0;
    bool have_prev = false;
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (const auto& s : series.samples) {
      double t = s.time.seconds();
      if (t > horizon_s) break;
      double v = std::sqrt(monitored_traffic(s));
      if (have_prev) integral += 0.5 * (v + prev_v) * (t - prev_t);
      prev_t = t;
      prev_v = v;
      have_prev = true;
    }
    out.integrals.emplace_back(series.n, integral);
  }
  std::sort(out.integrals.begin(), out.integrals.end());
  out.verdict = true;
  for (std::size_t i = 1; i < out.integrals.size(); ++i) {
    if (out.integrals[i].second < out.integrals[i - 1].second) out.verdict = false;
  }
  return out;
}

}  // namespace vnfsdn::metrics
