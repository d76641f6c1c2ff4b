#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spchain/ledger/transaction.hpp"

namespace spchain::sim {

enum class Adversary { None, Selfish, Flash, Fraud, Inhibition };

std::string to_string(Adversary a);
Adversary parse_adversary(const std::string& name);

struct ScenarioConfig {
  std::uint64_t seed = 1;

  // miners double as medical institutions
  std::size_t miners = 5;
  std::vector<double> power;  // empty: equal shares
  std::size_t group_size = 4;
  std::uint64_t block_size = 1'000'000;  // keyblock byte cap
  unsigned target_bits = 6;
  std::uint64_t rounds = 50;

  std::size_t patients = 20;
  double register_rate = 20.0;  // registrations per simulated second until everyone is in
  double tx_rate = 4.0;         // record operations per simulated second
  double label_prob = 0.1;
  double case3_prob = 0.2;
  double share_prob = 0.1;
  std::size_t record_size = 2048;

  double a = 5000.0;
  double lambda = 20000.0;
  std::uint64_t chunk = 20;
  std::string r1_model = "regularity";
  std::uint64_t r1_cap = 1;

  std::uint64_t step_us = 10'000;
  double attempts_per_step = 2.0;
  std::uint64_t delta_steps = 10;  // scheduler interval
  std::size_t batch_cap = 16;      // T_m
  std::uint64_t delay_min_us = 2'000;
  std::uint64_t delay_max_us = 20'000;
  double uplink_bytes_per_s = 12'500'000.0;
  bool shuffle_ties = false;
  std::uint64_t tie_seed = 0;

  ledger::Amount mining_reward = 50 * ledger::kCoin;
  ledger::Amount register_fee = 2 * ledger::kCoin;
  ledger::Amount tx_fee = 1 * ledger::kCoin;
  double creator_share = 0.5;

  bool taint = true;

  Adversary adversary = Adversary::None;
  std::size_t adversary_miner = 0;
  std::uint64_t withhold_rounds = 2;
  std::uint64_t flash_join_round = 0;
  double flash_power = 0.9;
  std::int64_t flash_misbehave_round = -1;  // -1: never
  std::size_t zombies = 0;
  std::size_t zombie_uploads = 2;

  // throws ConfigError
  void validate() const;
  std::vector<double> shares() const;
};

// Flat `key = value` text; `#` starts a comment. Unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Schema for the README and --help.
const std::vector<std::pair<std::string, std::string>>& config_schema();

}  // namespace spchain::sim
