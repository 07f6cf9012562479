#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vnfsdn::sim {

class UnknownStream : public std::out_of_range {
 public:
  explicit UnknownStream(const std::string& name) : std::out_of_range("unknown random stream: " + name) {}
};

/// Counter-based random stream. The n-th draw is a pure function of
/// (run seed, stream name, n), so streams never perturb one another.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string name);

  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Exponential with the given rate (mean 1/rate). Throws std::invalid_argument for rate <= 0.
  double exponential(double rate);
  /// Index drawn with probability proportional to weights.
  std::size_t choice(std::span<const double> weights);

 private:
  std::uint64_t seed_;
  std::string name_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Streams keyed by name, all derived from one run seed.
class RngRegistry {
 public:
  explicit RngRegistry(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  RngStream& register_stream(const std::string& name);
  RngStream& stream(const std::string& name);
  bool has(const std::string& name) const { return streams_.contains(name); }

 private:
  std::uint64_t seed_;
  std::map<std::string, RngStream, std::less<>> streams_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace vnfsdn::sim
