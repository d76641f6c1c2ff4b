#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spchain/rng.hpp"
#include "spchain/sim/event_loop.hpp"

namespace spchain::sim {

// Reliable point-to-point links: uniform per-message delay, serialization on
// the sender's uplink, optional partitions that hold messages until they heal.
class Network {
 public:
  Network(EventLoop& loop, Rng rng, Time delay_min, Time delay_max, double uplink_bytes_per_s);

  // Returns the delivery time.
  Time send(const std::string& from, const std::string& to, std::size_t bytes, std::function<void()> on_deliver);

  // Messages between a and b sent during [from, until) arrive after `until`.
  void partition(const std::string& a, const std::string& b, Time from, Time until);

  Time max_delay() const { return max_; }
  std::uint64_t messages() const { return messages_; }
  std::uint64_t bytes() const { return bytes_; }

 private:
  struct Cut {
    std::string a, b;
    Time from, until;
  };

  Time link_delay(const std::string& from, const std::string& to);

  EventLoop& loop_;
  std::uint64_t link_seed_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> link_seq_;
  Time min_, max_;
  double uplink_;
  std::map<std::string, Time> uplink_free_;
  std::vector<Cut> cuts_;
  std::uint64_t messages_ = 0;
  std::uint64_t bytes_ = 0;
};

}  // namespace spchain::sim
