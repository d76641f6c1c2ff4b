#pragma once

#include <string>
#include <vector>

#include "spchain/sim/simulation.hpp"

namespace spchain::sim {

// Runs independent scenarios concurrently; results keep input order.
std::vector<ScenarioResult> run_many(const std::vector<ScenarioConfig>& configs);

struct SelfishSeed {
  std::uint64_t seed = 0;
  double adversary_share = 0;       // of all rewards paid
  double adversary_kb_share = 0;    // of pinned keyblocks
  double baseline_kb_share = 0;     // same miner, honest
  std::uint64_t withheld_rejected = 0;
  std::uint64_t adversary_keyblocks = 0;
  bool adversary_honest = true;
};

struct SelfishReport {
  double power = 0;
  std::vector<SelfishSeed> seeds;
  double adversary_share = 0;   // mean over seeds
  double baseline_share = 0;
  std::uint64_t conflicts = 0;
};

// `base` is copied per seed with adversary=selfish; the baseline uses adversary=none.
SelfishReport selfish_attack(const ScenarioConfig& base, std::size_t seeds);

struct FlashReport {
  // late joiner
  std::vector<std::uint64_t> seeds;
  std::size_t late_runs_in_group = 0;  // runs where the attacker ever entered the group
  double late_max_R = 0, late_min_incumbent_in_group_R = 1;
  // misbehaving attacker present from round 0
  bool early_in_group_before = false;
  std::uint64_t misbehave_round = 0;
  double R_before = 0, R_at = 0, R_after = 0;  // R at rounds m-1, m, m+1
  double r1_before = 0, r1_at = 0, r2_at = 0;
  bool excluded_after = false;  // out of the group from m+2 to the end
  bool honest_after = true;
  std::uint64_t conflicts = 0;
};

FlashReport flash_attack(const ScenarioConfig& base, std::size_t seeds);

struct FraudPoint {
  std::size_t zombies = 0;
  Amount fees = 0;
  double r2 = 0, R = 0;
  double r2_gain = 0;  // over zombies = 0
};

struct FraudReport {
  std::vector<FraudPoint> curve;
};

FraudReport fraud_attack(const ScenarioConfig& base, const std::vector<std::size_t>& zombies);

struct InhibitionReport {
  std::size_t group_size = 0;
  std::uint64_t rounds_in_group_below_third = 0;  // rounds where the bound applies
  std::uint64_t victim_records = 0;               // pinned under that condition throughout
  std::uint64_t max_victim_latency = 0;
  std::uint64_t stalled_rounds = 0;
  std::uint64_t pin_failures = 0;
  double mean_adversary_weight = 0;  // while in the group
};

InhibitionReport inhibition_attack(const ScenarioConfig& base);

std::string selfish_csv(const SelfishReport& r);
std::string flash_text(const FlashReport& r);
std::string fraud_csv(const FraudReport& r);
std::string inhibition_text(const InhibitionReport& r);

}  // namespace spchain::sim
