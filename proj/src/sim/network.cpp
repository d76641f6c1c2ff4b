#include "spchain/sim/network.hpp"

#include <algorithm>
#include <cmath>

#include "spchain/error.hpp"

namespace spchain::sim {

Network::Network(EventLoop& loop, Rng rng, Time delay_min, Time delay_max, double uplink_bytes_per_s)
    : loop_(loop), link_seed_(rng.next()), min_(delay_min), max_(delay_max), uplink_(uplink_bytes_per_s) {
  if (delay_min > delay_max) throw Error("delay_min exceeds delay_max");
  if (!(uplink_bytes_per_s > 0)) throw Error("uplink bandwidth must be positive");
}

Time Network::send(const std::string& from, const std::string& to, std::size_t bytes,
                   std::function<void()> on_deliver) {
  auto now = loop_.now();
  auto& free_at = uplink_free_[from];
  auto transmit = static_cast<Time>(std::ceil(static_cast<double>(bytes) * 1e6 / uplink_));
  Time depart = std::max(now, free_at) + transmit;
  free_at = depart;
  Time arrive = depart + link_delay(from, to);
  for (const auto& c : cuts_) {
    bool pair = (c.a == from && c.b == to) || (c.a == to && c.b == from);
    if (pair && depart >= c.from && depart < c.until) arrive = std::max(arrive, c.until + (arrive - depart));
  }
  ++messages_;
  bytes_ += bytes;
  loop_.schedule(arrive, Phase::Delivery, std::move(on_deliver));
  return arrive;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
  return h;
}

}  // namespace

// Keyed by link and per-link sequence, so interleaving across links does not
// move anyone's delays around.
Time Network::link_delay(const std::string& from, const std::string& to) {
  auto seq = link_seq_[{from, to}]++;
  auto key = splitmix64(link_seed_ ^ splitmix64(fnv1a(from) ^ splitmix64(fnv1a(to) ^ splitmix64(seq))));
  return Rng(key).uniform_between(min_, max_);
}

void Network::partition(const std::string& a, const std::string& b, Time from, Time until) {
  if (until <= from) throw Error("empty partition interval");
  cuts_.push_back({a, b, from, until});
}

}  // namespace spchain::sim
