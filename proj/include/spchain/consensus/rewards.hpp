#pragma once

#include <map>
#include <vector>

#include "spchain/ledger/block.hpp"

namespace spchain::consensus {

using ledger::Amount;
using ledger::MinerId;

struct FeeSchedule {
  Amount mining_reward = 50 * ledger::kCoin;
  double creator_share = 0.5;  // of each microblock fee; the rest goes to signers
};

using Rewards = std::map<MinerId, Amount>;

// Creator takes the mining reward plus every register fee.
// Throws unless the keyblock carries a certificate valid under `group`.
Rewards keyblock_rewards(const ledger::KeyBlock& block, const MinerId& creator, const ledger::ConsensusGroup& group,
                         const FeeSchedule& fees);

// Per newly appended entry: creator_share of its fee to `creator`, the rest split
// over that entry's signers by weight. Integer remainders go to the heaviest signer.
Rewards microblock_rewards(const std::vector<ledger::PinnedTransaction>& entries, const MinerId& creator,
                           const ledger::ConsensusGroup& group, const FeeSchedule& fees);

Amount total(const Rewards& rewards);
void add_into(Rewards& into, const Rewards& from);

}  // namespace spchain::consensus
