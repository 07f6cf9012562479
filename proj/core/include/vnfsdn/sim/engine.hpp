#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "vnfsdn/model/types.hpp"

namespace vnfsdn::sim {

enum class EventKind : std::uint8_t {
  PacketArrival,
  PacketDeparture,
  RuleTimeout,
  WindowBoundary,
  TrafficEmit,
  AttackStart,
  AttackStop,
  MonitorSample,
};
inline constexpr std::size_t kEventKinds = 8;

struct Event {
  SimTime time;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::PacketArrival;
  std::uint32_t target = 0;    // handler-defined: node, port, generator...
  std::uint64_t payload = 0;   // handler-defined: packet slot, rule id...
};

class TimeTravel : public std::logic_error {
 public:
  TimeTravel(SimTime at, SimTime now)
      : std::logic_error("event scheduled at " + std::to_string(at.us) + "us before now " + std::to_string(now.us) +
                         "us") {}
};

/// Single-threaded discrete-event kernel. Events run in (time, seq) order;
/// seq is assigned in enqueue order so equal-time events keep FIFO order.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  SimTime now() const { return now_; }

  void on(EventKind kind, Handler h) { handlers_[static_cast<std::size_t>(kind)] = std::move(h); }
  /// Called for every dispatched event before its handler.
  void observe(Handler h) { observer_ = std::move(h); }

  void schedule(SimTime at, EventKind kind, std::uint32_t target = 0, std::uint64_t payload = 0);
  void schedule_in(std::uint64_t delay_us, EventKind kind, std::uint32_t target = 0, std::uint64_t payload = 0) {
    schedule(now_ + delay_us, kind, target, payload);
  }

  /// Processes every event with time <= horizon, then sets now() = horizon.
  std::uint64_t run_until(SimTime horizon);

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t scheduled_total() const { return next_seq_; }
  std::uint64_t processed_total() const { return processed_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  SimTime now_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::array<Handler, kEventKinds> handlers_{};
  Handler observer_;
};

}  // namespace vnfsdn::sim
