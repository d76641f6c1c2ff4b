#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace spchain::consensus {

// Per-chunk service counters for one miner.
struct ChunkStats {
  std::uint64_t chunk_size = 0;     // c
  std::uint64_t chain_length = 0;   // L
  std::uint64_t microblocks = 0;    // N
  std::uint64_t transactions = 0;   // T
  std::vector<std::uint64_t> tr;    // register txs received per chunk
  std::vector<std::uint64_t> tml;   // medical + label txs received per chunk

  std::size_t chunks() const { return tr.size(); }
};

struct ReputationParams {
  double a = 5000.0;
  double lambda = 20000.0;
};

// 1/2 (1 + (x - a) / (lambda + |x - a|))
double service_curve(double x, double a, double lambda);

// Transaction-service score. Throws "insufficient history" when l, N or T is zero.
double compute_r2(const ChunkStats& stats, bool honest, const ReputationParams& params);

// Keyblock history for one miner, split into chunks of the chain.
struct MinerHistory {
  bool honest = true;
  std::vector<std::uint64_t> created;    // pinned keyblocks this miner created, per chunk
  std::vector<std::uint64_t> chunk_len;  // pinned keyblocks in each chunk
};

// Mining-history score; swappable.
class R1Provider {
 public:
  virtual ~R1Provider() = default;
  virtual double score(const MinerHistory& history) const = 0;
  virtual std::string name() const = 0;
};

// H * created / total.
class PinnedShareR1 final : public R1Provider {
 public:
  double score(const MinerHistory& history) const override;
  std::string name() const override { return "share"; }
};

// H * sum(min(k_i, cap_i)) / sum(cap_i), cap_i = min(cap, len_i).
// Rewards mining in many chunks over bursts in a few. cap >= chunk size gives the plain share.
class RegularityR1 final : public R1Provider {
 public:
  explicit RegularityR1(std::uint64_t cap) : cap_(cap) {}
  double score(const MinerHistory& history) const override;
  std::string name() const override { return "regularity"; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

std::unique_ptr<R1Provider> make_r1_provider(const std::string& name, std::uint64_t cap);

double combine_reputation(double r1, double r2);

}  // namespace spchain::consensus
