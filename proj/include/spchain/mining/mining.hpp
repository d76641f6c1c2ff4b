#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/ledger/block.hpp"

namespace spchain::mining {

using crypto::PublicKey;
using ledger::KeyBlock;

// 2^(256 - bits); bits == 0 gives the all-pass target 2^256 - 1.
Hash32 target_from_bits(unsigned bits);

// Big-endian comparison: hash < target.
bool meets_target(const Hash32& hash, const Hash32& target);

bool check_puzzle(const KeyBlock& block);

// Genesis constants, set by system management.
const Hash32& genesis_keyblock_hash();
const Hash32& genesis_microblock_hash();

enum class Verdict { Accept, Reject, Orphan };
std::string_view to_string(Verdict v);

// Pinned prefix plus the unpinned candidates a node is holding.
class ChainView {
 public:
  std::uint64_t pinned_height() const { return pinned_.size(); }  // height of the next keyblock
  const std::vector<KeyBlock>& pinned() const { return pinned_; }
  Hash32 tip_hash() const;

  // Hash a keyblock at `height` must commit to as its penultimate microblock.
  Hash32 penu_for(std::uint64_t height) const;

  // Last microblock touched in `round` (the round opened by keyblock `round`).
  void record_microblock(std::uint64_t round, const Hash32& hash);
  std::optional<Hash32> last_microblock(std::uint64_t round) const;

  // Stores a candidate that fork_choice accepted or orphaned.
  void hold(const KeyBlock& block);
  const std::map<Hash32, KeyBlock>& held() const { return held_; }
  const KeyBlock* find_held(const Hash32& hash) const;

  // Longest held branch rooted on the pinned tip, ties by lowest hash.
  std::optional<Hash32> preferred_candidate() const;

  // Finalizes a held candidate at the next height. Conflicting candidates and
  // their descendants are dropped. Returns false if the block cannot be pinned.
  bool pin(const Hash32& hash, const ledger::PinCertificate& cert);

 private:
  std::uint64_t branch_length(const Hash32& hash) const;

  std::vector<KeyBlock> pinned_;
  std::map<Hash32, KeyBlock> held_;
  std::map<std::uint64_t, Hash32> last_micro_;
};

Verdict fork_choice(const ChainView& view, const KeyBlock& candidate);

struct MineResult {
  std::optional<KeyBlock> block;  // empty when the attempt budget ran out
  std::uint64_t attempts = 0;
  std::uint64_t next_nonce = 0;  // where to resume
};

// Builds the keyblock template on the pinned tip and searches nonces
// [start_nonce, start_nonce + max_attempts).
MineResult mine_keyblock(const ChainView& view, std::vector<ledger::Transaction> register_txs,
                         const PublicKey& miner, const Hash32& target, std::uint64_t max_attempts,
                         std::uint64_t start_nonce = 0);

// Same search over an explicit template.
MineResult mine_template(KeyBlock block, std::uint64_t max_attempts, std::uint64_t start_nonce = 0);

// Hashpower as a per-step attempt budget; fractional attempts carry over.
class AttemptBudget {
 public:
  explicit AttemptBudget(double per_step = 0.0) : per_step_(per_step) {}
  void set_rate(double per_step);
  double rate() const { return per_step_; }
  std::uint64_t take();

 private:
  double per_step_;
  std::uint64_t steps_ = 0;
  std::uint64_t taken_ = 0;
};

}  // namespace spchain::mining
