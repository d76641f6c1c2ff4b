#include "spchain/crypto/hash.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace spchain::crypto {

Hash32 sha256(ByteView data) {
  detail::ensure_sodium();
  Hash32 out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Hash32 sha256(std::initializer_list<ByteView> parts) {
  detail::ensure_sodium();
  crypto_hash_sha256_state state;
  crypto_hash_sha256_init(&state);
  for (auto part : parts) crypto_hash_sha256_update(&state, part.data(), part.size());
  Hash32 out{};
  crypto_hash_sha256_final(&state, out.data());
  return out;
}

}  // namespace spchain::crypto
