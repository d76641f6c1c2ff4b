#pragma once

#include <string>
#include <vector>

#include "spchain/crypto/chameleon.hpp"
#include "spchain/crypto/hash.hpp"
#include "spchain/crypto/signature.hpp"
#include "spchain/ledger/block.hpp"
#include "spchain/ledger/chain_state.hpp"
#include "spchain/ledger/pin.hpp"

namespace fixtures {

using namespace spchain;

inline crypto::SigningKey key(const std::string& name) {
  return crypto::SigningKey::from_seed(crypto::sha256(as_view(name)));
}

struct Member {
  std::string id;
  crypto::SigningKey signer;
  double weight;
};

inline std::vector<Member> members(const std::vector<double>& weights) {
  std::vector<Member> out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::string id = "m" + std::to_string(i);
    out.push_back(Member{id, key("member-" + id), weights[i]});
  }
  return out;
}

inline ledger::ConsensusGroup group_of(const std::vector<Member>& ms, std::uint64_t epoch = 0) {
  ledger::ConsensusGroup g;
  g.epoch = epoch;
  for (const auto& m : ms) g.members.push_back({m.id, m.signer.public_key(), m.weight});
  return g;
}

// Certificate signed by the members at `signers` (indices into `ms`).
inline ledger::PinCertificate certify(const Hash32& subject, const std::vector<Member>& ms,
                                      const std::vector<std::size_t>& signers, std::uint64_t epoch = 0) {
  ledger::PinCertificate cert;
  cert.subject = subject;
  cert.epoch = epoch;
  cert.group_size = static_cast<std::uint32_t>(ms.size());
  for (const auto& m : ms) cert.group_weight += m.weight;
  auto msg = ledger::pin_message(subject);
  for (auto i : signers) cert.signatures.push_back({ms[i].id, ms[i].weight, ms[i].signer.sign(msg)});
  return cert;
}

// One institution on the toy group with trapdoor 7 and h2 = 5.
struct ToyWorld {
  crypto::BilinearGroup group = crypto::BilinearGroup::toy();
  crypto::ChameleonKeys inst_keys = crypto::ch_keys_from_trapdoor(group, crypto::Scalar{7}, crypto::G1{5});
  crypto::SigningKey inst_signer = key("institution-A");
  ledger::InstitutionInfo inst{"inst-A", inst_signer.public_key(), inst_keys.hash_key};
  std::vector<Member> committee = members({0.4, 0.3, 0.2, 0.1});
  ledger::ConsensusGroup group_ = group_of(committee);
  ledger::ChainState state{group};

  ToyWorld() {
    state.add_institution(inst);
    state.set_round(5);
  }

  ledger::Transaction register_tx(const crypto::SigningKey& patient, const std::string& name,
                                  std::uint64_t round = 0) {
    ledger::TxFields f;
    f.identity_digest = ledger::identity_digest({name, "34"});
    return ledger::build_tx(ledger::TxType::Register, f, round, 2 * ledger::kCoin, patient, group);
  }

  void enroll(const crypto::SigningKey& patient, const std::string& name, std::uint64_t round = 0) {
    ledger::MicroBlock mb;
    mb.registration_round = round;
    mb.institution_leaves = {inst.leaf()};
    mb.institution_root = crypto::ch_hash(inst.hash_key, crypto::Scalar{1}, crypto::Scalar{2});
    mb.creator = inst.id;
    state.open_microblock(register_tx(patient, name, round), mb);
  }

  crypto::ChameleonDigest digest(std::uint64_t m, std::uint64_t r = 10) {
    return crypto::ch_hash(inst.hash_key, crypto::Scalar{m}, crypto::Scalar{r});
  }

  ledger::Transaction medical_tx(const crypto::SigningKey& patient, std::uint64_t m, std::uint64_t round = 1,
                                 std::optional<Hash32> target = std::nullopt) {
    ledger::TxFields f;
    f.institution = inst.key;
    f.record = digest(m);
    f.pointer = "ptr-" + std::to_string(m);
    f.target = target;
    return ledger::build_tx(target ? ledger::TxType::Label : ledger::TxType::Medical, f, round, ledger::kCoin,
                            patient, group, &inst.hash_key);
  }

  ledger::PinnedTransaction pinned(const ledger::Transaction& tx) {
    return {tx, certify(tx.id(), committee, {0, 1, 2})};
  }
};

}  // namespace fixtures
