#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "spchain/ledger/transaction.hpp"

namespace spchain::consensus {

// max(1, floor(10 R)); the epsilon keeps 0.3 * 10 from flooring to 2.
inline std::size_t quota(double reputation) {
  double q = std::floor(10.0 * std::max(0.0, reputation) + 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(q));
}

template <class T>
struct SchedulerState {
  std::map<ledger::MinerId, std::deque<T>> queues;  // FIFO per institution
  std::size_t batch_cap = 0;                        // T_m

  void submit(const ledger::MinerId& institution, T item) { queues[institution].push_back(std::move(item)); }
  std::size_t pending() const {
    std::size_t n = 0;
    for (const auto& [_, q] : queues) n += q.size();
    return n;
  }
};

template <class T>
struct Scheduled {
  ledger::MinerId institution;
  T item;
};

// Passes over institutions in descending reputation (ties by id), each taking
// up to quota(R) from the front of its queue, until T_m items or nothing left.
// One slot stays reserved for every later institution not yet served, so with
// T_m >= #institutions nobody starves. Missing reputations count as R = 0.
template <class T>
std::vector<Scheduled<T>> schedule_batch(SchedulerState<T>& state, const std::map<ledger::MinerId, double>& reputations) {
  std::vector<std::pair<ledger::MinerId, double>> order;
  for (const auto& [id, q] : state.queues) {
    if (q.empty()) continue;
    auto it = reputations.find(id);
    order.emplace_back(id, it == reputations.end() ? 0.0 : it->second);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<Scheduled<T>> batch;
  std::vector<bool> served(order.size(), false);
  std::size_t unserved = order.size();
  bool progress = true;
  while (batch.size() < state.batch_cap && progress) {
    progress = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto& q = state.queues[order[i].first];
      std::size_t reserve = unserved - (served[i] ? 0 : 1);
      std::size_t room = state.batch_cap - batch.size();
      room = room > reserve ? room - reserve : (served[i] ? 0 : std::min<std::size_t>(room, 1));
      std::size_t k = std::min({quota(order[i].second), q.size(), room});
      for (std::size_t j = 0; j < k; ++j) {
        batch.push_back({order[i].first, std::move(q.front())});
        q.pop_front();
      }
      if (k > 0) {
        progress = true;
        if (!served[i]) {
          served[i] = true;
          --unserved;
        }
      }
    }
  }
  return batch;
}

}  // namespace spchain::consensus
