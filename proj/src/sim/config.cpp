#include "spchain/sim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spchain/error.hpp"

namespace spchain::sim {

std::string to_string(Adversary a) {
  switch (a) {
    case Adversary::None: return "none";
    case Adversary::Selfish: return "selfish";
    case Adversary::Flash: return "flash";
    case Adversary::Fraud: return "fraud";
    case Adversary::Inhibition: return "inhibition";
  }
  return "?";
}

Adversary parse_adversary(const std::string& name) {
  for (auto a : {Adversary::None, Adversary::Selfish, Adversary::Flash, Adversary::Fraud, Adversary::Inhibition})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown adversary '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

ledger::Amount parse_coins(const std::string& key, const std::string& v) {
  double c = parse_double(key, v);
  if (c < 0) throw ConfigError(key + ": must not be negative");
  return static_cast<ledger::Amount>(std::llround(c * static_cast<double>(ledger::kCoin)));
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema = {
      {"seed", "integer; master seed"},
      {"miners", "integer >= 1; miners, each also a medical institution"},
      {"power", "comma list of hashpower shares summing to 1 (default equal)"},
      {"group_size", "X, consensus group size, <= miners"},
      {"block_size", "keyblock byte cap"},
      {"target_bits", "leading zero bits of the mining target, 0-32"},
      {"rounds", "keyblocks to pin"},
      {"patients", "patients registering at start"},
      {"register_rate", "registrations per simulated second"},
      {"tx_rate", "record operations per simulated second"},
      {"label_prob", "share of operations that label an earlier record"},
      {"case3_prob", "share of uploads at a second institution"},
      {"share_prob", "share of operations that share records"},
      {"record_size", "synthetic EMR size in bytes"},
      {"a", "reputation curve midpoint"},
      {"lambda", "reputation curve spread, > 0"},
      {"chunk", "keyblocks per reputation chunk"},
      {"r1_model", "regularity | share"},
      {"r1_cap", "per-chunk credit cap for the regularity model"},
      {"step_us", "simulated microseconds per mining step"},
      {"attempts_per_step", "total hash attempts per step across all miners"},
      {"delta_steps", "scheduler interval in steps"},
      {"batch_cap", "T_m, transactions per batch"},
      {"delay_min_us", "minimum link delay"},
      {"delay_max_us", "maximum link delay"},
      {"uplink_bytes_per_s", "per-node uplink bandwidth"},
      {"shuffle_ties", "randomize same-time message delivery order"},
      {"tie_seed", "seed for shuffle_ties"},
      {"mining_reward", "coins per pinned keyblock"},
      {"register_fee", "coins per register transaction"},
      {"tx_fee", "coins per medical or label transaction"},
      {"creator_share", "fraction of a record fee paid to the microblock creator"},
      {"taint", "track record plaintext through every actor"},
      {"adversary", "none | selfish | flash | fraud | inhibition"},
      {"adversary_miner", "index of the adversarial miner"},
      {"withhold_rounds", "selfish: rounds a keyblock is withheld"},
      {"flash_join_round", "flash: round the attacker starts mining"},
      {"flash_power", "flash: hashpower share once joined"},
      {"flash_misbehave_round", "flash: round of one conflicting proposal, -1 for never"},
      {"zombies", "fraud: zombie patients created by the adversary"},
      {"zombie_uploads", "fraud: records each zombie uploads"},
  };
  return schema;
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& v) {
  if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
  else if (key == "miners") c.miners = parse_int<std::size_t>(key, v);
  else if (key == "power") {
    c.power.clear();
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) c.power.push_back(parse_double(key, trim(part)));
  } else if (key == "group_size") c.group_size = parse_int<std::size_t>(key, v);
  else if (key == "block_size") c.block_size = parse_int<std::uint64_t>(key, v);
  else if (key == "target_bits") c.target_bits = parse_int<unsigned>(key, v);
  else if (key == "rounds") c.rounds = parse_int<std::uint64_t>(key, v);
  else if (key == "patients") c.patients = parse_int<std::size_t>(key, v);
  else if (key == "register_rate") c.register_rate = parse_double(key, v);
  else if (key == "tx_rate") c.tx_rate = parse_double(key, v);
  else if (key == "label_prob") c.label_prob = parse_double(key, v);
  else if (key == "case3_prob") c.case3_prob = parse_double(key, v);
  else if (key == "share_prob") c.share_prob = parse_double(key, v);
  else if (key == "record_size") c.record_size = parse_int<std::size_t>(key, v);
  else if (key == "a") c.a = parse_double(key, v);
  else if (key == "lambda") c.lambda = parse_double(key, v);
  else if (key == "chunk") c.chunk = parse_int<std::uint64_t>(key, v);
  else if (key == "r1_model") c.r1_model = v;
  else if (key == "r1_cap") c.r1_cap = parse_int<std::uint64_t>(key, v);
  else if (key == "step_us") c.step_us = parse_int<std::uint64_t>(key, v);
  else if (key == "attempts_per_step") c.attempts_per_step = parse_double(key, v);
  else if (key == "delta_steps") c.delta_steps = parse_int<std::uint64_t>(key, v);
  else if (key == "batch_cap") c.batch_cap = parse_int<std::size_t>(key, v);
  else if (key == "delay_min_us") c.delay_min_us = parse_int<std::uint64_t>(key, v);
  else if (key == "delay_max_us") c.delay_max_us = parse_int<std::uint64_t>(key, v);
  else if (key == "uplink_bytes_per_s") c.uplink_bytes_per_s = parse_double(key, v);
  else if (key == "shuffle_ties") c.shuffle_ties = parse_bool(key, v);
  else if (key == "tie_seed") c.tie_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "mining_reward") c.mining_reward = parse_coins(key, v);
  else if (key == "register_fee") c.register_fee = parse_coins(key, v);
  else if (key == "tx_fee") c.tx_fee = parse_coins(key, v);
  else if (key == "creator_share") c.creator_share = parse_double(key, v);
  else if (key == "taint") c.taint = parse_bool(key, v);
  else if (key == "adversary") c.adversary = parse_adversary(v);
  else if (key == "adversary_miner") c.adversary_miner = parse_int<std::size_t>(key, v);
  else if (key == "withhold_rounds") c.withhold_rounds = parse_int<std::uint64_t>(key, v);
  else if (key == "flash_join_round") c.flash_join_round = parse_int<std::uint64_t>(key, v);
  else if (key == "flash_power") c.flash_power = parse_double(key, v);
  else if (key == "flash_misbehave_round") c.flash_misbehave_round = parse_int<std::int64_t>(key, v);
  else if (key == "zombies") c.zombies = parse_int<std::size_t>(key, v);
  else if (key == "zombie_uploads") c.zombie_uploads = parse_int<std::size_t>(key, v);
  else throw ConfigError("unknown key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<double> ScenarioConfig::shares() const {
  if (power.empty()) return std::vector<double>(miners, 1.0 / static_cast<double>(miners));
  return power;
}

void ScenarioConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(miners >= 1, "miners must be positive");
  need(group_size >= 1, "group_size must be positive");
  need(rounds >= 1, "rounds must be positive");
  need(patients >= 1, "patients must be positive");
  need(record_size >= 32, "record_size must be at least 32 bytes");
  need(block_size >= 1024, "block_size must be at least 1024 bytes");
  need(target_bits <= 32, "target_bits must be within 0-32");
  need(chunk >= 1, "chunk must be positive");
  need(r1_model == "regularity" || r1_model == "share", "r1_model must be regularity or share");
  need(r1_cap >= 1, "r1_cap must be positive");
  need(step_us >= 1 && delta_steps >= 1, "step_us and delta_steps must be positive");
  need(attempts_per_step > 0, "attempts_per_step must be positive");
  need(batch_cap >= 1, "batch_cap must be positive");
  need(delay_min_us <= delay_max_us, "delay_min_us exceeds delay_max_us");
  need(uplink_bytes_per_s > 0, "uplink_bytes_per_s must be positive");
  need(lambda > 0, "lambda must be positive");
  need(register_rate > 0 && tx_rate >= 0, "rates must be positive");
  for (double p : {label_prob, case3_prob, share_prob}) need(p >= 0 && p <= 1, "probabilities must lie in [0,1]");
  need(label_prob + share_prob <= 1, "label_prob + share_prob must not exceed 1");
  need(creator_share >= 0 && creator_share <= 1, "creator_share must lie in [0,1]");
  if (!power.empty()) {
    need(power.size() == miners, "power needs one share per miner");
    double sum = 0;
    for (double p : power) {
      need(p >= 0, "power shares must not be negative");
      sum += p;
    }
    need(std::fabs(sum - 1.0) <= 1e-9, "power shares must sum to 1");
  }
  std::size_t present = miners;
  if (adversary != Adversary::None) need(adversary_miner < miners, "adversary_miner out of range");
  if (adversary == Adversary::Flash) {
    need(flash_power > 0 && flash_power < 1, "flash_power must lie in (0,1)");
    need(miners >= 2, "flash needs at least one honest miner");
    if (flash_join_round > 0) present = miners - 1;
  }
  need(group_size <= present, "group_size exceeds the miners present at round 0");
  need(batch_cap >= miners, "batch_cap must be at least the number of institutions");
}

}  // namespace spchain::sim
