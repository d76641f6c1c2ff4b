#include "spchain/sim/attacks.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <future>
#include <map>

#include "spchain/sim/report.hpp"

namespace spchain::sim {

std::vector<ScenarioResult> run_many(const std::vector<ScenarioConfig>& configs) {
  std::vector<std::future<ScenarioResult>> jobs;
  for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, [c] { return run_scenario(c); }));
  std::vector<ScenarioResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

namespace {

double reward_share(const ScenarioResult& r, const std::string& id) {
  Amount all = 0;
  for (const auto& m : r.miners) all += m.total();
  return all > 0 ? static_cast<double>(r.miner(id).total()) / static_cast<double>(all) : 0.0;
}

double keyblock_share(const ScenarioResult& r, const std::string& id) {
  return r.rounds.empty() ? 0.0 : static_cast<double>(r.miner(id).keyblocks) / static_cast<double>(r.rounds.size());
}

const ReputationRow* rep_at(const ScenarioResult& r, std::uint64_t round, const std::string& id) {
  for (const auto& row : r.reputation)
    if (row.round == round && row.miner == id) return &row;
  return nullptr;
}

}  // namespace

SelfishReport selfish_attack(const ScenarioConfig& base, std::size_t seeds) {
  std::vector<ScenarioConfig> cfgs;
  for (std::size_t s = 0; s < seeds; ++s) {
    auto c = base;
    c.seed = base.seed + s;
    c.adversary = Adversary::Selfish;
    cfgs.push_back(c);
    c.adversary = Adversary::None;
    cfgs.push_back(c);
  }
  auto results = run_many(cfgs);
  SelfishReport rep;
  auto id = miner_id(base.adversary_miner);
  rep.power = base.shares()[base.adversary_miner];
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto& adv = results[2 * s];
    const auto& honest = results[2 * s + 1];
    SelfishSeed row;
    row.seed = adv.config.seed;
    row.adversary_share = reward_share(adv, id);
    row.adversary_kb_share = keyblock_share(adv, id);
    row.baseline_kb_share = keyblock_share(honest, id);
    row.withheld_rejected = adv.rejected_keyblocks;
    row.adversary_keyblocks = adv.miner(id).keyblocks;
    row.adversary_honest = adv.miner(id).honest;
    rep.adversary_share += row.adversary_share / static_cast<double>(seeds);
    rep.baseline_share += row.baseline_kb_share / static_cast<double>(seeds);
    rep.conflicts += adv.conflicts + honest.conflicts;
    rep.seeds.push_back(row);
  }
  return rep;
}

FlashReport flash_attack(const ScenarioConfig& base, std::size_t seeds) {
  FlashReport rep;
  std::vector<ScenarioConfig> cfgs;
  for (std::size_t s = 0; s < seeds; ++s) {
    auto c = base;
    c.seed = base.seed + s;
    c.adversary = Adversary::Flash;
    c.flash_misbehave_round = -1;
    if (c.flash_join_round == 0) c.flash_join_round = c.rounds / 2;
    cfgs.push_back(c);
    rep.seeds.push_back(c.seed);
  }
  // present from round 0, honest until it misbehaves once
  auto early = base;
  early.adversary = Adversary::Flash;
  early.flash_join_round = 0;
  if (early.flash_misbehave_round < 0) early.flash_misbehave_round = static_cast<std::int64_t>(early.rounds / 2);
  cfgs.push_back(early);

  auto results = run_many(cfgs);
  auto id = miner_id(base.adversary_miner);
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto& r = results[s];
    bool entered = false;
    for (const auto& row : r.reputation) {
      if (row.miner == id) {
        entered = entered || row.in_group;
        rep.late_max_R = std::max(rep.late_max_R, row.R);
      } else if (row.in_group && row.round >= r.config.flash_join_round) {
        rep.late_min_incumbent_in_group_R = std::min(rep.late_min_incumbent_in_group_R, row.R);
      }
    }
    if (entered) ++rep.late_runs_in_group;
    rep.conflicts += r.conflicts;
  }

  const auto& e = results.back();
  auto m = static_cast<std::uint64_t>(early.flash_misbehave_round);
  rep.misbehave_round = m;
  rep.conflicts += e.conflicts;
  for (const auto& row : e.reputation)
    if (row.miner == id && row.round < m && row.in_group) rep.early_in_group_before = true;
  if (const auto* b = rep_at(e, m - 1, id)) {
    rep.R_before = b->R;
    rep.r1_before = b->r1;
  }
  if (const auto* a = rep_at(e, m, id)) {
    rep.R_at = a->R;
    rep.r1_at = a->r1;
    rep.r2_at = a->r2;
  }
  if (const auto* a = rep_at(e, m + 1, id)) rep.R_after = a->R;
  rep.excluded_after = true;
  // membership for round k is chosen from reputation at the end of round k-1
  for (const auto& row : e.reputation)
    if (row.miner == id && row.round >= m + 2 && row.in_group) rep.excluded_after = false;
  rep.honest_after = e.miner(id).honest;
  return rep;
}

FraudReport fraud_attack(const ScenarioConfig& base, const std::vector<std::size_t>& zombies) {
  std::vector<ScenarioConfig> cfgs;
  for (auto z : zombies) {
    auto c = base;
    c.adversary = Adversary::Fraud;
    c.zombies = z;
    cfgs.push_back(c);
  }
  auto results = run_many(cfgs);
  auto id = miner_id(base.adversary_miner);
  FraudReport rep;
  std::optional<double> zero;
  for (std::size_t i = 0; i < zombies.size(); ++i)
    if (zombies[i] == 0) zero = results[i].miner(id).r2;
  for (std::size_t i = 0; i < zombies.size(); ++i) {
    const auto& m = results[i].miner(id);
    rep.curve.push_back({zombies[i], results[i].fraud_fees, m.r2, m.R, zero ? m.r2 - *zero : 0.0});
  }
  return rep;
}

InhibitionReport inhibition_attack(const ScenarioConfig& base) {
  auto c = base;
  c.adversary = Adversary::Inhibition;
  auto r = run_scenario(c);
  auto id = miner_id(c.adversary_miner);
  InhibitionReport rep;
  rep.group_size = c.group_size;
  rep.stalled_rounds = r.stalled_rounds;
  rep.pin_failures = r.pin_failures;
  std::map<std::uint64_t, double> weight;
  std::uint64_t in_group = 0;
  for (const auto& row : r.rounds) {
    weight[row.round] = row.adversary_weight;
    if (row.adversary_in_group) {
      ++in_group;
      rep.mean_adversary_weight += row.adversary_weight;
      if (row.adversary_weight < 1.0 / 3.0) ++rep.rounds_in_group_below_third;
    }
  }
  if (in_group) rep.mean_adversary_weight /= static_cast<double>(in_group);
  for (const auto& l : r.latencies) {
    if (l.receiptor == id) continue;
    bool below = true;
    for (auto k = l.submitted; k <= l.pinned; ++k)
      if (weight.count(k) && weight[k] >= 1.0 / 3.0) below = false;
    if (!below) continue;
    ++rep.victim_records;
    rep.max_victim_latency = std::max(rep.max_victim_latency, l.pinned - l.submitted);
  }
  return rep;
}

std::string selfish_csv(const SelfishReport& r) {
  std::string out = fmt::format("{}\nseed,adversary_reward_share,adversary_keyblock_share,baseline_keyblock_share,"
                                "rejected_keyblocks,adversary_keyblocks,adversary_honest\n",
                                kCsvHeader);
  for (const auto& s : r.seeds)
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{},{}\n", s.seed, s.adversary_share, s.adversary_kb_share,
                       s.baseline_kb_share, s.withheld_rejected, s.adversary_keyblocks, s.adversary_honest ? 1 : 0);
  return out;
}

std::string flash_text(const FlashReport& r) {
  std::string out;
  out += fmt::format("late_join_runs = {}\nlate_join_runs_in_group = {}\nlate_join_max_R = {:.6f}\n", r.seeds.size(),
                     r.late_runs_in_group, r.late_max_R);
  out += fmt::format("late_join_min_member_R = {:.6f}\n", r.late_min_incumbent_in_group_R);
  out += fmt::format("early_in_group_before_misbehaving = {}\nmisbehave_round = {}\n", r.early_in_group_before,
                     r.misbehave_round);
  out += fmt::format("R_before = {:.6f}\nr1_before = {:.6f}\nR_at = {:.6f}\nr1_at = {:.6f}\nr2_at = {:.6f}\n",
                     r.R_before, r.r1_before, r.R_at, r.r1_at, r.r2_at);
  out += fmt::format("R_after = {:.6f}\n", r.R_after);
  out += fmt::format("excluded_after = {}\nhonest_after = {}\nconflicts = {}\n", r.excluded_after, r.honest_after,
                     r.conflicts);
  return out;
}

std::string fraud_csv(const FraudReport& r) {
  std::string out = fmt::format("{}\nzombies,fees_micro,r2,R,r2_gain\n", kCsvHeader);
  for (const auto& p : r.curve)
    out += fmt::format("{},{},{:.9f},{:.9f},{:.9f}\n", p.zombies, p.fees, p.r2, p.R, p.r2_gain);
  return out;
}

std::string inhibition_text(const InhibitionReport& r) {
  return fmt::format(
      "group_size = {}\nrounds_in_group_below_third = {}\nmean_adversary_weight = {:.6f}\nvictim_records = {}\n"
      "max_victim_latency_rounds = {}\nstalled_rounds = {}\npin_failures = {}\n",
      r.group_size, r.rounds_in_group_below_third, r.mean_adversary_weight, r.victim_records, r.max_victim_latency,
      r.stalled_rounds, r.pin_failures);
}

}  // namespace spchain::sim
