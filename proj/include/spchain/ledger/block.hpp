#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/crypto/chameleon.hpp"
#include "spchain/ledger/pin.hpp"
#include "spchain/ledger/transaction.hpp"

namespace spchain::ledger {

struct PinnedTransaction {
  Transaction tx;
  PinCertificate cert;
  bool operator==(const PinnedTransaction&) const = default;
};

struct KeyBlock {
  Hash32 prev_keyblock_hash{};
  Hash32 penu_microblock_hash{};
  std::uint64_t nonce = 0;
  PublicKey miner{};
  std::vector<Transaction> register_txs;
  Hash32 target{};
  std::uint64_t height = 0;
  std::optional<PinCertificate> pin;

  // H(prev_keyblock_hash || penu_microblock_hash || nonce || PK)
  Hash32 puzzle_hash() const;
  // Block identity: hash of the canonical encoding without the pin certificate.
  Hash32 hash() const;

  bool operator==(const KeyBlock&) const = default;
};

// The patient block: one per registered patient, holding the full record history.
struct MicroBlock {
  PublicKey owner{};
  std::uint64_t registration_round = 0;
  std::vector<Bytes> institution_leaves;
  crypto::ChameleonDigest institution_root;
  MinerId creator;
  std::uint64_t round_number = 0;  // round of the most recent change
  Hash32 prev_hash{};              // previous microblock touched in that round, or its keyblock
  std::vector<PinnedTransaction> entries;

  Hash32 hash(const crypto::BilinearGroup& group) const;

  bool operator==(const MicroBlock&) const = default;
};

using Block = std::variant<KeyBlock, MicroBlock>;

// Returns `block` with `pinned` at the tail. Throws "unpinned transaction"
// unless the certificate is valid for the transaction under `group`.
MicroBlock append_pinned_tx(const MicroBlock& block, PinnedTransaction pinned, const ConsensusGroup& group);

// Newest label reachable from `tx_id` through label-of-label chains, or nullptr.
const PinnedTransaction* newest_label(const MicroBlock& block, const Hash32& tx_id);

// The record a reader should treat as current for `tx_id`.
const MedicalPayload* current_record(const MicroBlock& block, const Hash32& tx_id);

}  // namespace spchain::ledger
