#include "spchain/node/actors.hpp"

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"
#include "spchain/ledger/merkle.hpp"

namespace spchain::node {

namespace {

Hash32 derive(ByteView seed, std::string_view label) { return crypto::sha256({seed, as_view(label)}); }

std::uint64_t rng_seed(ByteView seed) {
  auto h = derive(seed, "rng");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | h[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

EmrRecord synthetic_record(Rng& rng, std::size_t size, MinerId institution, std::string patient, std::uint64_t round) {
  EmrRecord rec;
  rec.plaintext.resize(size);
  rng.fill(rec.plaintext);
  rec.institution = std::move(institution);
  rec.patient = std::move(patient);
  rec.round = round;
  return rec;
}

PatientActor::PatientActor(std::string name, crypto::SymmetricKey key, crypto::SigningKey signer, Rng rng)
    : name_(std::move(name)), key_(key), signer_(std::move(signer)), rng_(rng) {
  address_ = crypto::address_of(signer_.public_key());
}

PatientActor PatientActor::setup(const std::string& name, ByteView seed) {
  auto key_seed = derive(seed, "patient-symmetric");
  return PatientActor(name, crypto::SymmetricKey::derive(key_seed),
                      crypto::SigningKey::from_seed(derive(seed, "patient-signing")), Rng(rng_seed(seed)));
}

Hash32 PatientActor::identity() const { return ledger::identity_digest({name_, address_}); }

Transaction PatientActor::make_register(std::uint64_t round, Amount fee, const crypto::BilinearGroup& group) const {
  ledger::TxFields f;
  f.identity_digest = identity();
  return ledger::build_tx(ledger::TxType::Register, f, round, fee, signer_, group);
}

Bytes PatientActor::seal_inner(ByteView plaintext) { return crypto::seal_layer(plaintext, key_, crypto::Layer::Inner, rng_); }

Bytes PatientActor::open_inner(ByteView sealed) const { return crypto::unseal_layer(sealed, key_, crypto::Layer::Inner); }

bool PatientActor::verify_record(const crypto::HashKey& hk, const crypto::ChameleonDigest& d) const {
  return crypto::ch_verify(hk, d.message, d);
}

InstitutionActor::InstitutionActor(MinerId id, crypto::SymmetricKey key, crypto::SigningKey signer,
                                   crypto::ChameleonKeys keys, Rng rng)
    : id_(std::move(id)), key_(key), signer_(std::move(signer)), keys_(std::move(keys)), rng_(rng) {
  address_ = crypto::address_of(signer_.public_key());
}

InstitutionActor InstitutionActor::setup(const MinerId& id, ByteView seed, const crypto::BilinearGroup& group,
                                         unsigned security_bits) {
  Rng rng(rng_seed(seed));
  auto ch_rng = rng.fork(1);
  auto keys = crypto::ch_keygen(security_bits, group, ch_rng);
  return InstitutionActor(id, crypto::SymmetricKey::derive(derive(seed, "institution-symmetric")),
                          crypto::SigningKey::from_seed(derive(seed, "institution-signing")), std::move(keys),
                          rng.fork(2));
}

Bytes InstitutionActor::seal_outer(ByteView inner) { return crypto::seal_layer(inner, key_, crypto::Layer::Outer, rng_); }

Bytes InstitutionActor::open_outer(ByteView sealed) const {
  return crypto::unseal_layer(sealed, key_, crypto::Layer::Outer);
}

crypto::ChameleonDigest InstitutionActor::digest_for(ByteView sealed) {
  return crypto::ch_hash(keys_.hash_key, crypto::message_scalar(keys_.hash_key.group, sealed), rng_);
}

crypto::ChameleonDigest InstitutionActor::make_root(const std::vector<Bytes>& leaves) {
  return ledger::institution_root(leaves, keys_.hash_key, rng_);
}

crypto::ChameleonDigest InstitutionActor::redact_root(const crypto::ChameleonDigest& root,
                                                      const std::vector<Bytes>& leaves) const {
  return ledger::redact_institution_root(keys_.trapdoor, keys_.hash_key, root, leaves);
}

}  // namespace spchain::node
