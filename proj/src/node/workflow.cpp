#include "spchain/node/workflow.hpp"

#include <algorithm>
#include <cstring>
#include <utility>

#include "spchain/error.hpp"

namespace spchain::node {

namespace {

constexpr std::size_t kFingerprint = 32;  // bytes of random record data that identify it

std::uint64_t load8(const std::uint8_t* p) {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

}  // namespace

void TaintTracker::track(const std::string& tag, ByteView plaintext, std::set<std::string> authorized) {
  if (plaintext.size() < kFingerprint) throw Error("tracked records need at least 32 bytes");
  if (records_.count(tag)) throw Error("record already tracked: " + tag);
  records_[tag] = Tracked{Bytes(plaintext.begin(), plaintext.end()), std::move(authorized)};
  by_prefix_[load8(plaintext.data())].push_back(tag);
}

void TaintTracker::authorize(const std::string& tag, const std::string& actor) {
  auto it = records_.find(tag);
  if (it == records_.end()) throw Error("untracked record " + tag);
  it->second.authorized.insert(actor);
}

std::vector<std::string> TaintTracker::observe(const std::string& holder, ByteView bytes) {
  std::vector<std::string> found;
  if (bytes.size() < kFingerprint || by_prefix_.empty()) return found;
  for (std::size_t i = 0; i + kFingerprint <= bytes.size(); ++i) {
    auto it = by_prefix_.find(load8(bytes.data() + i));
    if (it == by_prefix_.end()) continue;
    for (const auto& tag : it->second) {
      const auto& pt = records_.at(tag).plaintext;
      if (!std::equal(pt.begin(), pt.begin() + kFingerprint, bytes.begin() + static_cast<std::ptrdiff_t>(i))) continue;
      seen_[tag].insert(holder);
      if (std::find(found.begin(), found.end(), tag) == found.end()) found.push_back(tag);
    }
  }
  return found;
}

std::vector<std::pair<std::string, std::string>> TaintTracker::leaks() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [tag, holders] : seen_) {
    const auto& auth = records_.at(tag).authorized;
    for (const auto& h : holders)
      if (!auth.count(h)) out.emplace_back(h, tag);
  }
  return out;
}

void EventLog::record(std::uint64_t round, const std::string& actor, const std::string& action, const Hash32& tx_id) {
  note(round, actor, action, to_hex(tx_id));
}

void EventLog::note(std::uint64_t round, const std::string& actor, const std::string& action,
                    const std::string& detail) {
  lines_.push_back(std::to_string(round) + "," + actor + "," + action + "," + detail);
}

const ledger::MicroBlock& open_patient_block(ledger::ChainState& state, const Transaction& reg,
                                             InstitutionActor& registrar, const MinerId& creator, std::uint64_t round) {
  ledger::MicroBlock block;
  block.registration_round = round;
  block.round_number = round;
  block.institution_leaves = {registrar.info().leaf()};
  block.institution_root = registrar.make_root(block.institution_leaves);
  block.creator = creator;
  return state.open_microblock(reg, std::move(block));
}

bool admit_institution(ledger::ChainState& state, const crypto::PublicKey& patient, const InstitutionActor& registrar,
                       const InstitutionActor& newcomer) {
  const auto* block = state.microblock(patient);
  if (block == nullptr) throw Error("unregistered patient");
  auto leaf = newcomer.info().leaf();
  if (std::find(block->institution_leaves.begin(), block->institution_leaves.end(), leaf) !=
      block->institution_leaves.end())
    return false;
  auto leaves = block->institution_leaves;
  leaves.push_back(leaf);
  auto root = registrar.redact_root(block->institution_root, leaves);
  state.update_root(patient, std::move(leaves), std::move(root));
  return true;
}

namespace {

Transaction seal_and_sign(PatientActor& patient, InstitutionActor& institution, const EmrRecord& record,
                          const ledger::ChainState& state, std::uint64_t round, Amount fee,
                          std::optional<Hash32> target) {
  auto inner = patient.seal_inner(record.plaintext);
  auto outer = institution.seal_outer(inner);
  auto pointer = institution.store().put(outer);
  ledger::TxFields f;
  f.institution = institution.public_key();
  f.record = institution.digest_for(outer);
  f.pointer = pointer;
  f.target = target;
  auto type = target ? ledger::TxType::Label : ledger::TxType::Medical;
  if (!patient.verify_record(institution.hash_key(), *f.record)) throw Error("chameleon proof does not verify");
  auto tx = ledger::build_tx(type, f, round, fee, patient.signer(), state.group(), &institution.hash_key());
  patient.remember(tx.id());
  return tx;
}

}  // namespace

Transaction upload(PatientActor& patient, InstitutionActor& institution, const EmrRecord& record,
                   const ledger::ChainState& state, std::uint64_t round, Amount fee) {
  if (!state.is_registered(patient.public_key())) throw Error("unregistered patient");
  return seal_and_sign(patient, institution, record, state, round, fee, std::nullopt);
}

Transaction label(PatientActor& patient, InstitutionActor& institution, const Hash32& wrong_tx,
                  const EmrRecord& corrected, const ledger::ChainState& state, std::uint64_t round, Amount fee) {
  const auto* entry = state.find_entry(patient.public_key(), wrong_tx);
  if (entry == nullptr) throw Error("label target not found in patient block");
  const auto* rec = entry->tx.record();
  if (rec == nullptr || rec->institution != institution.public_key())
    throw Error("label target was not issued by this institution");
  return seal_and_sign(patient, institution, corrected, state, round, fee, wrong_tx);
}

std::vector<SharedRecord> share(PatientActor& patient, InstitutionActor& source, const std::string& target_id,
                                const std::vector<Hash32>& tx_ids, const ledger::ChainState& state,
                                TaintTracker* taint) {
  if (!source.available()) throw Error("source institution refused the share request");
  std::vector<SharedRecord> out;
  for (const auto& id : tx_ids) {
    const auto* entry = state.find_entry(patient.public_key(), id);
    if (entry == nullptr) throw Error("shared transaction not in patient block");
    const auto* rec = entry->tx.record();
    if (rec == nullptr || rec->institution != source.public_key())
      throw Error("shared transaction was not issued by the source institution");
    const auto& outer = source.store().get(rec->pointer);
    if (crypto::message_scalar(state.group(), outer) != rec->record.message)
      throw Error("off-chain ciphertext does not match the on-chain digest");
    auto inner = source.open_outer(outer);
    if (taint) taint->observe(source.id(), inner);
    auto plain = patient.open_inner(inner);
    if (taint) taint->observe(patient.name(), plain);
    out.push_back({id, std::move(plain)});
  }
  // delivery happens only once every record opened
  if (taint)
    for (const auto& r : out) taint->observe(target_id, r.plaintext);
  return out;
}

std::vector<HistoryEntry> retrieve_history(const ledger::ChainState& state, const crypto::PublicKey& patient) {
  const auto* block = state.microblock(patient);
  if (block == nullptr) throw Error("unknown patient");
  std::vector<HistoryEntry> out;
  std::map<Hash32, std::size_t> index;
  for (const auto& e : block->entries) {
    HistoryEntry h;
    h.tx_id = e.tx.id();
    h.type = e.tx.type();
    if (const auto* rec = e.tx.record()) {
      h.institution = rec->institution;
      h.pointer = rec->pointer;
    }
    if (const auto* t = e.tx.label_target()) h.label_target = *t;
    index[h.tx_id] = out.size();
    out.push_back(std::move(h));
  }
  for (auto& h : out) {
    if (const auto* newest = ledger::newest_label(*block, h.tx_id)) h.corrected_by = index.at(newest->tx.id());
  }
  return out;
}

}  // namespace spchain::node
