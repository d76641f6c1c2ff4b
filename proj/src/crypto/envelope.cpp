#include "spchain/crypto/envelope.hpp"

#include <sodium.h>

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"
#include "sodium_init.hpp"

namespace spchain::crypto {

namespace {

constexpr std::size_t kNonce = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
constexpr std::size_t kTag = crypto_aead_xchacha20poly1305_ietf_ABYTES;

std::string_view layer_label(Layer layer) {
  return layer == Layer::Inner ? "spchain-emr-inner" : "spchain-emr-outer";
}

}  // namespace

SymmetricKey SymmetricKey::derive(ByteView seed) {
  return SymmetricKey(sha256({as_view("spchain-symmetric-key"), seed}));
}

KeyId SymmetricKey::id() const {
  auto digest = sha256({as_view("spchain-key-id"), ByteView(bytes_)});
  KeyId id = 0;
  for (int i = 0; i < 8; ++i) id = (id << 8) | digest[i];
  return id;
}

Bytes seal_layer(ByteView plaintext, const SymmetricKey& key, Layer layer, Rng& rng) {
  detail::ensure_sodium();
  auto ad = layer_label(layer);
  Bytes out(kNonce + plaintext.size() + kTag);
  rng.fill(std::span(out.data(), kNonce));
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(out.data() + kNonce, &written, plaintext.data(), plaintext.size(),
                                             reinterpret_cast<const unsigned char*>(ad.data()), ad.size(), nullptr,
                                             out.data(), key.bytes().data());
  out.resize(kNonce + written);
  return out;
}

Bytes unseal_layer(ByteView sealed, const SymmetricKey& key, Layer layer) {
  detail::ensure_sodium();
  if (sealed.size() < kNonce + kTag) throw AuthenticationError("ciphertext too short");
  auto ad = layer_label(layer);
  Bytes out(sealed.size() - kNonce - kTag);
  unsigned long long written = 0;
  int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      out.data(), &written, nullptr, sealed.data() + kNonce, sealed.size() - kNonce,
      reinterpret_cast<const unsigned char*>(ad.data()), ad.size(), sealed.data(), key.bytes().data());
  if (rc != 0) {
    sodium_memzero(out.data(), out.size());
    throw AuthenticationError("authentication failed: wrong key or tampered ciphertext");
  }
  out.resize(written);
  return out;
}

SealedEmr seal_emr(ByteView record, const SymmetricKey& patient_key, const SymmetricKey& institution_key, Rng& rng) {
  Bytes inner = seal_layer(record, patient_key, Layer::Inner, rng);
  SealedEmr sealed;
  sealed.ciphertext = seal_layer(inner, institution_key, Layer::Outer, rng);
  sealed.patient_key_id = patient_key.id();
  sealed.institution_key_id = institution_key.id();
  sealed.plaintext_length = record.size();
  return sealed;
}

Bytes open_outer(const SealedEmr& sealed, const SymmetricKey& institution_key) {
  return unseal_layer(sealed.ciphertext, institution_key, Layer::Outer);
}

}  // namespace spchain::crypto
