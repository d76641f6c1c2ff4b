#include "spchain/ledger/chain_state.hpp"

#include "spchain/error.hpp"

namespace spchain::ledger {

Bytes InstitutionInfo::leaf() const {
  Writer w;
  w.str(id);
  w.raw(key);
  crypto::write_hash_key(w, hash_key);
  return std::move(w).bytes();
}

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::Ok: return "OK";
    case Reason::BadSignature: return "BAD_SIGNATURE";
    case Reason::Unregistered: return "UNREGISTERED";
    case Reason::AlreadyRegistered: return "ALREADY_REGISTERED";
    case Reason::UnknownInstitution: return "UNKNOWN_INSTITUTION";
    case Reason::BadChameleonProof: return "BAD_CHAMELEON_PROOF";
    case Reason::DanglingLabel: return "DANGLING_LABEL";
    case Reason::FutureRound: return "FUTURE_ROUND";
    case Reason::StaleRound: return "STALE_ROUND";
  }
  return "UNKNOWN";
}

void ChainState::add_institution(InstitutionInfo info) {
  auto key = info.key;
  institutions_.insert_or_assign(key, std::move(info));
}

const InstitutionInfo* ChainState::institution(const PublicKey& key) const {
  auto it = institutions_.find(key);
  return it == institutions_.end() ? nullptr : &it->second;
}

const InstitutionInfo* ChainState::institution(std::string_view id) const {
  for (const auto& [key, info] : institutions_) {
    if (info.id == id) return &info;
  }
  return nullptr;
}

std::vector<const InstitutionInfo*> ChainState::institutions() const {
  std::vector<const InstitutionInfo*> out;
  for (const auto& [key, info] : institutions_) out.push_back(&info);
  return out;
}

const MicroBlock& ChainState::open_microblock(const Transaction& reg, MicroBlock block) {
  const auto* payload = reg.registration();
  if (payload == nullptr) throw Error("patient blocks are opened by register transactions");
  if (is_registered(reg.sender()) || identity_taken(payload->identity_digest)) {
    throw Error("patient already holds a patient block");
  }
  block.owner = reg.sender();
  identities_.emplace(payload->identity_digest, reg.sender());
  order_.push_back(reg.sender());
  return blocks_.emplace(reg.sender(), std::move(block)).first->second;
}

MicroBlock& ChainState::mutable_block(const PublicKey& patient) {
  ++accesses_;
  auto it = blocks_.find(patient);
  if (it == blocks_.end()) throw Error("unknown patient block");
  return it->second;
}

const MicroBlock& ChainState::append(const PublicKey& patient, PinnedTransaction pinned,
                                     const ConsensusGroup& group) {
  if (pinned.tx.sender() != patient) throw Error("transaction sender does not own this patient block");
  auto verdict = validate_tx(pinned.tx, *this);
  if (!verdict) throw Error("invalid transaction: " + std::string(to_string(verdict.reason)));
  auto& block = mutable_block(patient);
  block = append_pinned_tx(block, std::move(pinned), group);
  ++record_txs_;
  return block;
}

void ChainState::update_root(const PublicKey& patient, std::vector<Bytes> leaves, crypto::ChameleonDigest root) {
  auto& block = mutable_block(patient);
  if (root.h != block.institution_root.h) throw Error("institution root update must keep the digest value");
  block.institution_leaves = std::move(leaves);
  block.institution_root = std::move(root);
}

void ChainState::set_linkage(const PublicKey& patient, std::uint64_t round, const Hash32& prev_hash) {
  auto& block = mutable_block(patient);
  block.round_number = round;
  block.prev_hash = prev_hash;
}

const MicroBlock* ChainState::microblock(const PublicKey& patient) const {
  ++accesses_;
  auto it = blocks_.find(patient);
  return it == blocks_.end() ? nullptr : &it->second;
}

const PinnedTransaction* ChainState::find_entry(const PublicKey& patient, const Hash32& tx_id) const {
  const auto* block = microblock(patient);
  if (block == nullptr) return nullptr;
  for (const auto& e : block->entries) {
    if (e.tx.id() == tx_id) return &e;
  }
  return nullptr;
}

Validation validate_tx(const Transaction& tx, const ChainState& state) {
  if (!tx.signature_valid()) return {Reason::BadSignature};
  if (tx.round() > state.current_round()) return {Reason::FutureRound};

  if (const auto* reg = tx.registration()) {
    if (state.is_registered(tx.sender()) || state.identity_taken(reg->identity_digest)) {
      return {Reason::AlreadyRegistered};
    }
    return {};
  }

  const auto* block = state.microblock(tx.sender());
  if (block == nullptr) return {Reason::Unregistered};
  const auto* record = tx.record();
  const auto* issuer = state.institution(record->institution);
  if (issuer == nullptr) return {Reason::UnknownInstitution};
  if (!crypto::ch_verify(issuer->hash_key, record->record.message, record->record)) {
    return {Reason::BadChameleonProof};
  }
  if (const auto* target = tx.label_target()) {
    bool found = false;
    for (const auto& e : block->entries) found = found || e.tx.id() == *target;
    if (!found) return {Reason::DanglingLabel};
  }
  if (tx.round() < block->registration_round) return {Reason::StaleRound};
  return {};
}

}  // namespace spchain::ledger
