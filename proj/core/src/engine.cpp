#include "vnfsdn/sim/engine.hpp"

namespace vnfsdn::sim {

void Engine::schedule(SimTime at, EventKind kind, std::uint32_t target, std::uint64_t payload) {
  if (at < now_) throw TimeTravel(at, now_);
  queue_.push(Event{at, next_seq_++, kind, target, payload});
}

std::uint64_t Engine::run_until(SimTime horizon) {
  if (horizon < now_) throw TimeTravel(horizon, now_);
  std::uint64_t count = 0;
  while (!queue_.empty() && queue_.top().time <= horizon) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    if (observer_) observer_(e);
    if (auto& h = handlers_[static_cast<std::size_t>(e.kind)]) h(e);
    ++count;
  }
  processed_ += count;
  now_ = horizon;
  return count;
}

}  // namespace vnfsdn::sim
