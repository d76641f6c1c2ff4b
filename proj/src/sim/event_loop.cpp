#include "spchain/sim/event_loop.hpp"

#include <tuple>

#include "spchain/error.hpp"

namespace spchain::sim {

EventLoop::EventLoop(std::optional<std::uint64_t> tie_seed) {
  if (tie_seed) tie_rng_.emplace(*tie_seed);
}

bool EventLoop::Later::operator()(const Event& a, const Event& b) const {
  return std::tie(a.at, a.phase, a.tiebreak, a.id) > std::tie(b.at, b.phase, b.tiebreak, b.id);
}

std::uint64_t EventLoop::schedule(Time at, Phase phase, std::function<void()> fn) {
  if (at < now_) throw Error("event scheduled in the past");
  auto id = next_id_++;
  std::uint64_t tb = tie_rng_ ? tie_rng_->next() : 0;
  queue_.push(Event{at, phase, tb, id, std::move(fn)});
  return id;
}

bool EventLoop::step() {
  if (queue_.empty()) return false;
  // top() is const; the callback is moved out through a copy of the node
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.at;
  ++executed_;
  ev.fn();
  return true;
}

void EventLoop::run(Time until) {
  while (!stopped_ && !queue_.empty() && queue_.top().at <= until) step();
}

}  // namespace spchain::sim
