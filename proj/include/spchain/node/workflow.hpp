#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spchain/ledger/chain_state.hpp"
#include "spchain/node/actors.hpp"

namespace spchain::node {

// Tracks which actors have seen which record plaintexts. Byte blobs passing
// through any actor, store or block are scanned for known plaintext.
class TaintTracker {
 public:
  // `authorized` may hold the plaintext of record `tag`.
  void track(const std::string& tag, ByteView plaintext, std::set<std::string> authorized);
  void authorize(const std::string& tag, const std::string& actor);
  // Scans `bytes` held by `holder`; returns the tags found.
  std::vector<std::string> observe(const std::string& holder, ByteView bytes);

  // (holder, tag) pairs where an unauthorized holder saw plaintext.
  std::vector<std::pair<std::string, std::string>> leaks() const;
  const std::map<std::string, std::set<std::string>>& seen() const { return seen_; }
  std::size_t tracked() const { return records_.size(); }

 private:
  struct Tracked {
    Bytes plaintext;
    std::set<std::string> authorized;
  };
  std::map<std::string, Tracked> records_;
  std::map<std::uint64_t, std::vector<std::string>> by_prefix_;  // first 8 bytes -> tags
  std::map<std::string, std::set<std::string>> seen_;            // tag -> holders
};

// One line per action: round, actor, action, tx id.
class EventLog {
 public:
  void record(std::uint64_t round, const std::string& actor, const std::string& action, const Hash32& tx_id);
  void note(std::uint64_t round, const std::string& actor, const std::string& action, const std::string& detail);
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

// Opens the patient block for a pinned register transaction; the receiving
// institution's leaf seeds the institution root.
const ledger::MicroBlock& open_patient_block(ledger::ChainState& state, const Transaction& reg,
                                             InstitutionActor& registrar, const MinerId& creator, std::uint64_t round);

// Adds `newcomer` to the patient's institution leaves when missing; the
// registrar redacts the root so h is unchanged. Returns true if it changed.
bool admit_institution(ledger::ChainState& state, const crypto::PublicKey& patient, const InstitutionActor& registrar,
                       const InstitutionActor& newcomer);

// Seal (patient, then institution), store off-chain, hash the sealed bytes,
// patient signs a Medical transaction. Nothing is emitted on a store failure.
Transaction upload(PatientActor& patient, InstitutionActor& institution, const EmrRecord& record,
                   const ledger::ChainState& state, std::uint64_t round, Amount fee);

// Same flow for a correction of `wrong_tx`, which must sit in the patient's own
// block and come from `institution`.
Transaction label(PatientActor& patient, InstitutionActor& institution, const Hash32& wrong_tx,
                  const EmrRecord& corrected, const ledger::ChainState& state, std::uint64_t round, Amount fee);

struct SharedRecord {
  Hash32 tx_id{};
  Bytes plaintext;
};

// Source strips its layer, patient strips theirs and forwards to `target_id`.
// All or nothing: any failure throws before anything is delivered.
std::vector<SharedRecord> share(PatientActor& patient, InstitutionActor& source, const std::string& target_id,
                                const std::vector<Hash32>& tx_ids, const ledger::ChainState& state,
                                TaintTracker* taint = nullptr);

struct HistoryEntry {
  Hash32 tx_id{};
  ledger::TxType type = ledger::TxType::Medical;
  crypto::PublicKey institution{};
  std::string pointer;
  std::optional<Hash32> label_target;
  std::optional<std::size_t> corrected_by;  // index of the newest label for this entry
};

// Single patient-block lookup, chronological, with label resolution.
std::vector<HistoryEntry> retrieve_history(const ledger::ChainState& state, const crypto::PublicKey& patient);

}  // namespace spchain::node
