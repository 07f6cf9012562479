#include "vnfsdn/sim/rng.hpp"

#include <cmath>
#include <numeric>

namespace vnfsdn::sim {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed, std::string name)
    : seed_(seed), name_(std::move(name)), key_(mix64(seed ^ mix64(fnv1a64(name_)))) {}

std::uint64_t RngStream::next_u64() {
  std::uint64_t c = counter_++;
  return mix64(key_ ^ mix64(c * 0xd1b54a32d192ed03ULL));
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential rate must be positive");
  return -std::log1p(-uniform()) / rate;
}

std::size_t RngStream::choice(std::span<const double> weights) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(total > 0.0)) throw std::invalid_argument("choice needs positive total weight");
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

RngStream& RngRegistry::register_stream(const std::string& name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) it = streams_.emplace(name, RngStream(seed_, name)).first;
  return it->second;
}

RngStream& RngRegistry::stream(const std::string& name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) throw UnknownStream(name);
  return it->second;
}

}  // namespace vnfsdn::sim
