#include "spchain/crypto/signature.hpp"

#include <sodium.h>

#include "spchain/crypto/hash.hpp"
#include "sodium_init.hpp"

namespace spchain::crypto {

SigningKey SigningKey::from_seed(const Hash32& seed) {
  detail::ensure_sodium();
  SigningKey key;
  crypto_sign_seed_keypair(key.public_.data(), key.secret_.data(), seed.data());
  return key;
}

SigningKey::~SigningKey() { sodium_memzero(secret_.data(), secret_.size()); }

Signature SigningKey::sign(ByteView message) const {
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

bool verify_sig(ByteView message, ByteView signature, const PublicKey& key) {
  detail::ensure_sodium();
  if (signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), key.data()) == 0;
}

std::string address_of(const PublicKey& key) {
  auto digest = sha256(ByteView(key));
  return to_hex(ByteView(digest).first(20));
}

}  // namespace spchain::crypto
