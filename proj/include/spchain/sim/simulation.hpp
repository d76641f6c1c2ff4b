#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/ledger/transaction.hpp"
#include "spchain/sim/config.hpp"

namespace spchain::sim {

using ledger::Amount;

struct RoundRow {
  std::uint64_t round = 0;
  double start_s = 0, end_s = 0;
  std::string keyblock_miner, leader, group;  // group ids joined by ';'
  std::uint64_t register_pinned = 0;
  std::uint64_t records_pinned = 0;
  double keyblock_tps = 0, microblock_tps = 0;
  std::uint64_t pending = 0;
  std::uint64_t pin_failures = 0;
  bool stalled = false;
  std::uint64_t conflicts = 0;
  std::uint64_t max_latency_rounds = 0;
  bool adversary_in_group = false;
  double adversary_weight = 0;  // share of group weight held by the adversary
};

struct RecordLatency {
  std::uint64_t submitted = 0, pinned = 0;  // rounds
  std::string receiptor;
};

struct ReputationRow {
  std::uint64_t round = 0;
  std::string miner;
  double r1 = 0, r2 = 0, R = 0;
  bool in_group = false;
};

struct RewardRow {
  std::uint64_t round = 0;
  std::string miner;
  Amount reward = 0;
  Amount cumulative = 0;
};

struct MinerSummary {
  std::string id;
  double power = 0;  // configured share (flash: share once joined)
  bool honest = true;
  Amount keyblock_reward = 0;
  Amount fee_reward = 0;
  std::uint64_t keyblocks = 0;
  bool ever_in_group = false;
  std::int64_t first_group_round = -1;
  std::uint64_t rounds_in_group = 0;
  double r1 = 0, r2 = 0, R = 0;
  std::uint64_t max_latency_rounds = 0;  // for records this institution received

  Amount total() const { return keyblock_reward + fee_reward; }
};

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<RoundRow> rounds;
  std::vector<ReputationRow> reputation;
  std::vector<RewardRow> rewards;
  std::vector<MinerSummary> miners;
  std::vector<std::string> events;
  std::vector<RecordLatency> latencies;
  std::vector<Hash32> pinned;  // keyblock hashes in pin order

  std::uint64_t conflicts = 0;
  std::uint64_t stalled_rounds = 0;
  std::uint64_t pin_failures = 0;
  std::uint64_t rejected_keyblocks = 0;
  std::uint64_t registered = 0;
  std::uint64_t records_pinned = 0;
  std::uint64_t shares = 0;
  std::uint64_t taint_leaks = 0;
  std::uint64_t tracked_records = 0;
  bool histories_complete = true;
  // chain-state reads per retrieve_history call at the end of the run
  std::uint64_t history_reads_min = 0, history_reads_max = 0;
  double simulated_seconds = 0;
  Amount fraud_fees = 0;
  std::uint64_t events_executed = 0;

  const MinerSummary& miner(const std::string& id) const;
};

// Pure function of the config. Throws ConfigError before simulating, and
// InvariantViolation if a safety check fails mid-run.
ScenarioResult run_scenario(const ScenarioConfig& config);

std::string miner_id(std::size_t index);

}  // namespace spchain::sim
