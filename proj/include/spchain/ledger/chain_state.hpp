#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/crypto/chameleon.hpp"
#include "spchain/ledger/block.hpp"

namespace spchain::ledger {

// Certified public information of a medical institution; its canonical
// encoding is the institution's leaf in every patient block's root tree.
struct InstitutionInfo {
  MinerId id;
  PublicKey key{};
  crypto::HashKey hash_key;

  Bytes leaf() const;
};

enum class Reason {
  Ok,
  BadSignature,
  Unregistered,
  AlreadyRegistered,
  UnknownInstitution,
  BadChameleonProof,
  DanglingLabel,
  FutureRound,
  StaleRound,
};

std::string_view to_string(Reason reason);

struct Validation {
  Reason reason = Reason::Ok;
  bool ok() const { return reason == Reason::Ok; }
  explicit operator bool() const { return ok(); }
};

// Registered patients, their patient blocks, and institution public info.
// Single writer; readers take const references. Every patient-block lookup is
// counted so retrieval cost can be measured.
class ChainState {
 public:
  explicit ChainState(crypto::BilinearGroup group) : group_(std::move(group)) {}

  const crypto::BilinearGroup& group() const { return group_; }

  void add_institution(InstitutionInfo info);
  const InstitutionInfo* institution(const PublicKey& key) const;
  const InstitutionInfo* institution(std::string_view id) const;
  std::vector<const InstitutionInfo*> institutions() const;

  std::uint64_t current_round() const { return round_; }
  void set_round(std::uint64_t round) { round_ = round; }

  bool is_registered(const PublicKey& patient) const { return blocks_.count(patient) != 0; }
  bool identity_taken(const Hash32& identity) const { return identities_.count(identity) != 0; }

  // Creates the patient block for a pinned register transaction.
  const MicroBlock& open_microblock(const Transaction& reg, MicroBlock block);

  // Appends a pinned medical/label transaction after validating it and its certificate.
  const MicroBlock& append(const PublicKey& patient, PinnedTransaction pinned, const ConsensusGroup& group);

  // Replaces the institution root of a patient block (redaction keeps h).
  void update_root(const PublicKey& patient, std::vector<Bytes> leaves, crypto::ChameleonDigest root);

  // Touch metadata: the round-chain linkage written when a block changes in a round.
  void set_linkage(const PublicKey& patient, std::uint64_t round, const Hash32& prev_hash);

  const MicroBlock* microblock(const PublicKey& patient) const;
  const PinnedTransaction* find_entry(const PublicKey& patient, const Hash32& tx_id) const;

  // Patients in the order their blocks were opened.
  const std::vector<PublicKey>& registration_order() const { return order_; }
  std::size_t microblock_count() const { return blocks_.size(); }
  std::uint64_t record_tx_count() const { return record_txs_; }

  std::uint64_t access_count() const { return accesses_; }

 private:
  MicroBlock& mutable_block(const PublicKey& patient);

  crypto::BilinearGroup group_;
  std::uint64_t round_ = 0;
  std::map<PublicKey, InstitutionInfo> institutions_;
  std::map<PublicKey, MicroBlock> blocks_;
  std::map<Hash32, PublicKey> identities_;
  std::vector<PublicKey> order_;
  std::uint64_t record_txs_ = 0;
  mutable std::uint64_t accesses_ = 0;
};

// Signature, registration, institution, chameleon proof, label target and
// round checks, in that order; the first failure is reported.
Validation validate_tx(const Transaction& tx, const ChainState& state);

}  // namespace spchain::ledger
