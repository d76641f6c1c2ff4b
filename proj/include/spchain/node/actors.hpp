#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/crypto/chameleon.hpp"
#include "spchain/crypto/envelope.hpp"
#include "spchain/crypto/signature.hpp"
#include "spchain/ledger/chain_state.hpp"
#include "spchain/node/store.hpp"
#include "spchain/rng.hpp"

namespace spchain::node {

using ledger::Amount;
using ledger::MinerId;
using ledger::Transaction;

// Synthetic clinical record.
struct EmrRecord {
  Bytes plaintext;
  MinerId institution;
  std::string patient;
  std::uint64_t round = 0;
};

EmrRecord synthetic_record(Rng& rng, std::size_t size, MinerId institution, std::string patient, std::uint64_t round);

class PatientActor {
 public:
  // Every key comes from `seed`; the same seed rebuilds the same patient.
  static PatientActor setup(const std::string& name, ByteView seed);

  const std::string& name() const { return name_; }
  const crypto::PublicKey& public_key() const { return signer_.public_key(); }
  const std::string& address() const { return address_; }
  const crypto::SymmetricKey& key() const { return key_; }
  const crypto::SigningKey& signer() const { return signer_; }
  Hash32 identity() const;

  Transaction make_register(std::uint64_t round, Amount fee, const crypto::BilinearGroup& group) const;

  Bytes seal_inner(ByteView plaintext);
  Bytes open_inner(ByteView sealed) const;

  // Patients check records they are handed against the institution's hash key.
  bool verify_record(const crypto::HashKey& hk, const crypto::ChameleonDigest& d) const;

  void remember(const Hash32& tx_id) { tx_ids_.push_back(tx_id); }
  const std::vector<Hash32>& tx_ids() const { return tx_ids_; }

 private:
  PatientActor(std::string name, crypto::SymmetricKey key, crypto::SigningKey signer, Rng rng);

  std::string name_;
  crypto::SymmetricKey key_;
  crypto::SigningKey signer_;
  std::string address_;
  Rng rng_;
  std::vector<Hash32> tx_ids_;
};

class InstitutionActor {
 public:
  static InstitutionActor setup(const MinerId& id, ByteView seed, const crypto::BilinearGroup& group,
                                unsigned security_bits);

  const MinerId& id() const { return id_; }
  const crypto::PublicKey& public_key() const { return signer_.public_key(); }
  const std::string& address() const { return address_; }
  const crypto::SymmetricKey& key() const { return key_; }
  const crypto::HashKey& hash_key() const { return keys_.hash_key; }
  ledger::InstitutionInfo info() const { return {id_, public_key(), keys_.hash_key}; }
  const crypto::SigningKey& signer() const { return signer_; }

  Bytes seal_outer(ByteView inner);
  Bytes open_outer(ByteView sealed) const;
  crypto::ChameleonDigest digest_for(ByteView sealed);

  OffChainStore& store() { return store_; }
  const OffChainStore& store() const { return store_; }

  // Root over `leaves` under this institution's hash key.
  crypto::ChameleonDigest make_root(const std::vector<Bytes>& leaves);
  // Same h, new leaf set; needs the trapdoor, which never leaves this object.
  crypto::ChameleonDigest redact_root(const crypto::ChameleonDigest& root, const std::vector<Bytes>& leaves) const;

  // Availability for share requests.
  void set_available(bool up) { available_ = up; }
  bool available() const { return available_; }

 private:
  InstitutionActor(MinerId id, crypto::SymmetricKey key, crypto::SigningKey signer, crypto::ChameleonKeys keys, Rng rng);

  MinerId id_;
  crypto::SymmetricKey key_;
  crypto::SigningKey signer_;
  crypto::ChameleonKeys keys_;
  std::string address_;
  Rng rng_;
  OffChainStore store_;
  bool available_ = true;
};

}  // namespace spchain::node
