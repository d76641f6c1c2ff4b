#pragma once

#include <array>

#include "spchain/bytes.hpp"

namespace spchain::crypto {

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

// Ed25519 keypair derived deterministically from a 32-byte seed.
class SigningKey {
 public:
  static SigningKey from_seed(const Hash32& seed);

  SigningKey(const SigningKey&) = default;
  SigningKey& operator=(const SigningKey&) = default;
  ~SigningKey();

  const PublicKey& public_key() const { return public_; }
  Signature sign(ByteView message) const;

 private:
  SigningKey() = default;

  std::array<std::uint8_t, 64> secret_{};
  PublicKey public_{};
};

// False for wrong-length signatures as well as forgeries.
bool verify_sig(ByteView message, ByteView signature, const PublicKey& key);

// Hex of the first 20 bytes of SHA-256(pk).
std::string address_of(const PublicKey& key);

}  // namespace spchain::crypto
