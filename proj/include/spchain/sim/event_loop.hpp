#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "spchain/rng.hpp"

namespace spchain::sim {

using Time = std::uint64_t;  // simulated microseconds

// Same-time events run by phase: message deliveries first, then arrivals,
// timers, and the mining tick last.
enum class Phase : std::uint8_t { Delivery = 0, Arrival = 1, Timer = 2, Tick = 3 };

class EventLoop {
 public:
  // With a tie seed, same-time same-phase events run in a seeded random order
  // instead of scheduling order.
  explicit EventLoop(std::optional<std::uint64_t> tie_seed = std::nullopt);

  std::uint64_t schedule(Time at, Phase phase, std::function<void()> fn);
  std::uint64_t after(Time delay, Phase phase, std::function<void()> fn) { return schedule(now_ + delay, phase, std::move(fn)); }

  // Runs one event; false when none is left.
  bool step();
  // Runs until the queue drains, stop() is called, or the next event is past `until`.
  void run(Time until = UINT64_MAX);
  void stop() { stopped_ = true; }
  bool stopped() const { return stopped_; }

  Time now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Event {
    Time at;
    Phase phase;
    std::uint64_t tiebreak;
    std::uint64_t id;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::optional<Rng> tie_rng_;
  Time now_ = 0;
  std::uint64_t next_id_ = 0;
  std::uint64_t executed_ = 0;
  bool stopped_ = false;
};

}  // namespace spchain::sim
