#include "spchain/consensus/rewards.hpp"

#include <cmath>

#include "spchain/error.hpp"

namespace spchain::consensus {

Rewards keyblock_rewards(const ledger::KeyBlock& block, const MinerId& creator, const ledger::ConsensusGroup& group,
                         const FeeSchedule& fees) {
  if (!block.pin) throw Error("unpinned block");
  auto status = ledger::check_certificate(*block.pin, block.hash(), group);
  if (status != ledger::CertStatus::Valid) throw Error("unpinned block: " + std::string(ledger::to_string(status)));
  Amount sum = fees.mining_reward;
  for (const auto& tx : block.register_txs) sum += tx.fee();
  return Rewards{{creator, sum}};
}

Rewards microblock_rewards(const std::vector<ledger::PinnedTransaction>& entries, const MinerId& creator,
                           const ledger::ConsensusGroup& group, const FeeSchedule& fees) {
  if (fees.creator_share < 0 || fees.creator_share > 1) throw Error("creator share out of range");
  Rewards out;
  for (const auto& e : entries) {
    auto status = ledger::check_certificate(e.cert, e.tx.id(), group);
    if (status != ledger::CertStatus::Valid)
      throw Error("unpinned transaction: " + std::string(ledger::to_string(status)));
    Amount fee = e.tx.fee();
    if (fee == 0) continue;
    auto share_units = std::llround(fees.creator_share * 1e9);
    __extension__ using i128 = __int128;
    auto to_creator = static_cast<Amount>(static_cast<i128>(fee) * share_units / 1'000'000'000);
    out[creator] += to_creator;
    Amount pool = fee - to_creator;
    // weights quantized to 1e-9 so the split is exact integer arithmetic
    std::vector<std::int64_t> units;
    std::int64_t unit_total = 0;
    for (const auto& s : e.cert.signatures) {
      units.push_back(std::llround(s.weight * 1e9));
      unit_total += units.back();
    }
    if (unit_total <= 0) throw Error("certificate carries no weight");
    const ledger::PinSignature* top = &e.cert.signatures.front();
    Amount paid = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto& s = e.cert.signatures[i];
      __extension__ using i128 = __int128;
      auto part = static_cast<Amount>(static_cast<i128>(pool) * units[i] / unit_total);
      out[s.signer] += part;
      paid += part;
      if (s.weight > top->weight) top = &s;
    }
    out[top->signer] += pool - paid;
  }
  return out;
}

Amount total(const Rewards& rewards) {
  Amount t = 0;
  for (const auto& [_, a] : rewards) t += a;
  return t;
}

void add_into(Rewards& into, const Rewards& from) {
  for (const auto& [id, a] : from) into[id] += a;
}

}  // namespace spchain::consensus
