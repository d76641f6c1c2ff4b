#include "spchain/sim/report.hpp"

#include <fmt/format.h>

#include <fstream>

#include "spchain/error.hpp"

namespace spchain::sim {

namespace {

double coins(Amount a) { return static_cast<double>(a) / static_cast<double>(ledger::kCoin); }

}  // namespace

std::string metrics_csv(const ScenarioResult& r) {
  std::string out = fmt::format("{}\n", kCsvHeader);
  out +=
      "round,start_s,end_s,keyblock_miner,leader,group,register_pinned,records_pinned,keyblock_tps,microblock_tps,"
      "pending,pin_failures,stalled,conflicts,max_latency_rounds,adversary_in_group,adversary_weight\n";
  for (const auto& row : r.rounds)
    out += fmt::format("{},{:.6f},{:.6f},{},{},{},{},{},{:.6f},{:.6f},{},{},{},{},{},{},{:.6f}\n", row.round,
                       row.start_s, row.end_s, row.keyblock_miner, row.leader, row.group, row.register_pinned,
                       row.records_pinned, row.keyblock_tps, row.microblock_tps, row.pending, row.pin_failures,
                       row.stalled ? 1 : 0, row.conflicts, row.max_latency_rounds, row.adversary_in_group ? 1 : 0,
                       row.adversary_weight);
  return out;
}

std::string reputation_csv(const ScenarioResult& r) {
  std::string out = fmt::format("{}\nround,minerId,r1,r2,R,in_group\n", kCsvHeader);
  for (const auto& row : r.reputation)
    out += fmt::format("{},{},{:.9f},{:.9f},{:.9f},{}\n", row.round, row.miner, row.r1, row.r2, row.R,
                       row.in_group ? 1 : 0);
  return out;
}

std::string rewards_csv(const ScenarioResult& r) {
  std::string out = fmt::format("{}\nround,minerId,reward_micro,cumulative_micro\n", kCsvHeader);
  for (const auto& row : r.rewards) out += fmt::format("{},{},{},{}\n", row.round, row.miner, row.reward, row.cumulative);
  return out;
}

std::string latency_csv(const ScenarioResult& r) {
  std::string out = fmt::format("{}\nsubmitted_round,pinned_round,receiptor\n", kCsvHeader);
  for (const auto& l : r.latencies) out += fmt::format("{},{},{}\n", l.submitted, l.pinned, l.receiptor);
  return out;
}

std::string format_config(const ScenarioConfig& c) {
  std::string power;
  for (std::size_t i = 0; i < c.power.size(); ++i) power += fmt::format("{}{}", i ? "," : "", c.power[i]);
  std::string out;
  auto kv = [&](const char* k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
  kv("seed", c.seed);
  kv("miners", c.miners);
  if (!c.power.empty()) kv("power", power);
  kv("group_size", c.group_size);
  kv("block_size", c.block_size);
  kv("target_bits", c.target_bits);
  kv("rounds", c.rounds);
  kv("patients", c.patients);
  kv("register_rate", c.register_rate);
  kv("tx_rate", c.tx_rate);
  kv("label_prob", c.label_prob);
  kv("case3_prob", c.case3_prob);
  kv("share_prob", c.share_prob);
  kv("record_size", c.record_size);
  kv("a", c.a);
  kv("lambda", c.lambda);
  kv("chunk", c.chunk);
  kv("r1_model", c.r1_model);
  kv("r1_cap", c.r1_cap);
  kv("step_us", c.step_us);
  kv("attempts_per_step", c.attempts_per_step);
  kv("delta_steps", c.delta_steps);
  kv("batch_cap", c.batch_cap);
  kv("delay_min_us", c.delay_min_us);
  kv("delay_max_us", c.delay_max_us);
  kv("uplink_bytes_per_s", c.uplink_bytes_per_s);
  kv("shuffle_ties", c.shuffle_ties ? "true" : "false");
  kv("tie_seed", c.tie_seed);
  kv("mining_reward", coins(c.mining_reward));
  kv("register_fee", coins(c.register_fee));
  kv("tx_fee", coins(c.tx_fee));
  kv("creator_share", c.creator_share);
  kv("taint", c.taint ? "true" : "false");
  kv("adversary", to_string(c.adversary));
  kv("adversary_miner", c.adversary_miner);
  kv("withhold_rounds", c.withhold_rounds);
  kv("flash_join_round", c.flash_join_round);
  kv("flash_power", c.flash_power);
  kv("flash_misbehave_round", c.flash_misbehave_round);
  kv("zombies", c.zombies);
  kv("zombie_uploads", c.zombie_uploads);
  return out;
}

std::string summary_text(const ScenarioResult& r) {
  std::string out = "# spchain run summary\n";
  out += format_config(r.config);
  out += "\n# outcome\n";
  auto kv = [&](const char* k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
  kv("rounds_pinned", r.rounds.size());
  kv("simulated_seconds", fmt::format("{:.6f}", r.simulated_seconds));
  kv("registered_patients", r.registered);
  kv("records_pinned", r.records_pinned);
  kv("shares", r.shares);
  kv("pinned_conflicts", r.conflicts);
  kv("stalled_rounds", r.stalled_rounds);
  kv("pin_failures", r.pin_failures);
  kv("rejected_keyblocks", r.rejected_keyblocks);
  kv("histories_complete", r.histories_complete ? "true" : "false");
  kv("history_reads_min", r.history_reads_min);
  kv("history_reads_max", r.history_reads_max);
  kv("tracked_records", r.tracked_records);
  kv("taint_leaks", r.taint_leaks);
  kv("fraud_fees_micro", r.fraud_fees);
  kv("events_executed", r.events_executed);
  if (!r.pinned.empty()) kv("tip", to_hex(r.pinned.back()));
  out += "\n# miners: id power honest keyblocks keyblock_reward_micro fee_reward_micro r1 r2 R rounds_in_group\n";
  for (const auto& m : r.miners)
    out += fmt::format("{} {:.6f} {} {} {} {} {:.6f} {:.6f} {:.6f} {}\n", m.id, m.power, m.honest ? 1 : 0, m.keyblocks,
                       m.keyblock_reward, m.fee_reward, m.r1, m.r2, m.R, m.rounds_in_group);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

void write_run(const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "metrics.csv", metrics_csv(r));
  write_file(dir / "reputation.csv", reputation_csv(r));
  write_file(dir / "rewards.csv", rewards_csv(r));
  write_file(dir / "latency.csv", latency_csv(r));
  std::string log;
  for (const auto& line : r.events) log += line + "\n";
  write_file(dir / "events.log", log);
  write_file(dir / "summary.txt", summary_text(r));
}

}  // namespace spchain::sim
