#include "spchain/mining/mining.hpp"

#include <algorithm>
#include <cmath>

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"

namespace spchain::mining {

Hash32 target_from_bits(unsigned bits) {
  Hash32 t{};
  if (bits == 0) {
    t.fill(0xff);
    return t;
  }
  if (bits > 256) throw Error("target bits out of range");
  if (bits == 256) return t;
  // single set bit at position 256 - bits
  unsigned pos = 256 - bits;
  t[31 - pos / 8] = static_cast<std::uint8_t>(1u << (pos % 8));
  return t;
}

bool meets_target(const Hash32& hash, const Hash32& target) {
  return std::lexicographical_compare(hash.begin(), hash.end(), target.begin(), target.end());
}

bool check_puzzle(const KeyBlock& block) { return meets_target(block.puzzle_hash(), block.target); }

const Hash32& genesis_keyblock_hash() {
  static const Hash32 h = crypto::sha256(as_view("spchain-genesis-keyblock"));
  return h;
}

const Hash32& genesis_microblock_hash() {
  static const Hash32 h = crypto::sha256(as_view("spchain-genesis-microblock"));
  return h;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    case Verdict::Orphan: return "orphan";
  }
  return "?";
}

Hash32 ChainView::tip_hash() const { return pinned_.empty() ? genesis_keyblock_hash() : pinned_.back().hash(); }

Hash32 ChainView::penu_for(std::uint64_t height) const {
  if (height < 2) return genesis_microblock_hash();
  auto round = height - 2;
  if (auto it = last_micro_.find(round); it != last_micro_.end()) return it->second;
  // quiet round: fall back to the keyblock that opened it
  if (round < pinned_.size()) return pinned_[round].hash();
  for (const auto& [h, b] : held_)
    if (b.height == round) return h;
  return genesis_microblock_hash();
}

void ChainView::record_microblock(std::uint64_t round, const Hash32& hash) { last_micro_[round] = hash; }

std::optional<Hash32> ChainView::last_microblock(std::uint64_t round) const {
  if (auto it = last_micro_.find(round); it != last_micro_.end()) return it->second;
  return std::nullopt;
}

void ChainView::hold(const KeyBlock& block) {
  if (block.height < pinned_.size()) return;
  held_.emplace(block.hash(), block);
}

const KeyBlock* ChainView::find_held(const Hash32& hash) const {
  auto it = held_.find(hash);
  return it == held_.end() ? nullptr : &it->second;
}

std::uint64_t ChainView::branch_length(const Hash32& hash) const {
  std::uint64_t best = 0;
  for (const auto& [h, b] : held_)
    if (b.prev_keyblock_hash == hash) best = std::max(best, branch_length(h));
  return best + 1;
}

std::optional<Hash32> ChainView::preferred_candidate() const {
  std::optional<Hash32> best;
  std::uint64_t best_len = 0;
  auto tip = tip_hash();
  for (const auto& [h, b] : held_) {
    if (b.height != pinned_.size() || b.prev_keyblock_hash != tip) continue;
    auto len = branch_length(h);
    // map order is ascending hash, so strict > keeps the lowest hash on ties
    if (len > best_len) {
      best = h;
      best_len = len;
    }
  }
  return best;
}

bool ChainView::pin(const Hash32& hash, const ledger::PinCertificate& cert) {
  auto it = held_.find(hash);
  if (it == held_.end()) return false;
  KeyBlock block = it->second;
  if (block.height != pinned_.size() || block.prev_keyblock_hash != tip_hash()) return false;
  block.pin = cert;
  pinned_.push_back(std::move(block));
  // drop everything not descending from the new tip
  bool changed = true;
  held_.erase(hash);
  while (changed) {
    changed = false;
    for (auto h = held_.begin(); h != held_.end();) {
      const auto& b = h->second;
      bool keep = b.height >= pinned_.size() &&
                  (b.prev_keyblock_hash == hash || held_.count(b.prev_keyblock_hash) > 0);
      if (b.height == pinned_.size() && b.prev_keyblock_hash != hash) keep = false;
      if (!keep) {
        h = held_.erase(h);
        changed = true;
      } else {
        ++h;
      }
    }
  }
  return true;
}

Verdict fork_choice(const ChainView& view, const KeyBlock& candidate) {
  if (!check_puzzle(candidate)) return Verdict::Reject;
  const auto& pinned = view.pinned();
  if (candidate.height < pinned.size())
    return candidate.hash() == pinned[candidate.height].hash() ? Verdict::Accept : Verdict::Reject;
  if (candidate.height == pinned.size()) {
    if (candidate.prev_keyblock_hash != view.tip_hash()) return Verdict::Reject;
    if (candidate.penu_microblock_hash != view.penu_for(candidate.height)) return Verdict::Reject;
    return Verdict::Accept;
  }
  const auto* parent = view.find_held(candidate.prev_keyblock_hash);
  if (parent == nullptr || parent->height + 1 != candidate.height) return Verdict::Reject;
  return Verdict::Orphan;
}

MineResult mine_template(KeyBlock block, std::uint64_t max_attempts, std::uint64_t start_nonce) {
  MineResult out;
  out.next_nonce = start_nonce;
  for (std::uint64_t i = 0; i < max_attempts; ++i) {
    block.nonce = start_nonce + i;
    ++out.attempts;
    if (check_puzzle(block)) {
      out.next_nonce = block.nonce + 1;
      out.block = std::move(block);
      return out;
    }
  }
  out.next_nonce = start_nonce + max_attempts;
  return out;
}

MineResult mine_keyblock(const ChainView& view, std::vector<ledger::Transaction> register_txs,
                         const PublicKey& miner, const Hash32& target, std::uint64_t max_attempts,
                         std::uint64_t start_nonce) {
  KeyBlock block;
  block.height = view.pinned_height();
  block.prev_keyblock_hash = view.tip_hash();
  block.penu_microblock_hash = view.penu_for(block.height);
  block.miner = miner;
  block.target = target;
  block.register_txs = std::move(register_txs);
  return mine_template(std::move(block), max_attempts, start_nonce);
}

// Cumulative floor so rounding error never accumulates across steps.
std::uint64_t AttemptBudget::take() {
  ++steps_;
  auto owed = static_cast<std::uint64_t>(std::floor(per_step_ * static_cast<double>(steps_) + 1e-9));
  auto n = owed - taken_;
  taken_ = owed;
  return n;
}

void AttemptBudget::set_rate(double per_step) {
  // restart accounting; the leftover fraction is dropped
  per_step_ = per_step;
  steps_ = 0;
  taken_ = 0;
}

}  // namespace spchain::mining
