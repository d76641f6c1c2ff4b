#include "spchain/ledger/block.hpp"

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"
#include "spchain/ledger/codec.hpp"

namespace spchain::ledger {

Hash32 KeyBlock::puzzle_hash() const {
  Writer nonce_bytes;
  nonce_bytes.u64(nonce);
  return crypto::sha256({prev_keyblock_hash, penu_microblock_hash, nonce_bytes.bytes(), miner});
}

Hash32 KeyBlock::hash() const { return crypto::sha256(encode_keyblock(*this, false)); }

Hash32 MicroBlock::hash(const crypto::BilinearGroup& group) const {
  return crypto::sha256(encode_microblock(*this, group));
}

MicroBlock append_pinned_tx(const MicroBlock& block, PinnedTransaction pinned, const ConsensusGroup& group) {
  auto status = check_certificate(pinned.cert, pinned.tx.id(), group);
  if (status != CertStatus::Valid) throw Error("unpinned transaction: " + std::string(to_string(status)));
  if (pinned.tx.record() == nullptr) throw Error("only medical and label transactions go into a patient block");
  if (pinned.tx.sender() != block.owner) throw Error("transaction sender does not own this patient block");
  MicroBlock out = block;
  out.entries.push_back(std::move(pinned));
  return out;
}

const PinnedTransaction* newest_label(const MicroBlock& block, const Hash32& tx_id) {
  const PinnedTransaction* newest = nullptr;
  Hash32 current = tx_id;
  for (;;) {
    const PinnedTransaction* next = nullptr;
    for (const auto& e : block.entries) {
      const Hash32* target = e.tx.label_target();
      if (target != nullptr && *target == current) next = &e;
    }
    if (next == nullptr) return newest;
    newest = next;
    current = next->tx.id();
  }
}

const MedicalPayload* current_record(const MicroBlock& block, const Hash32& tx_id) {
  if (const auto* label = newest_label(block, tx_id)) return label->tx.record();
  for (const auto& e : block.entries) {
    if (e.tx.id() == tx_id) return e.tx.record();
  }
  return nullptr;
}

}  // namespace spchain::ledger
