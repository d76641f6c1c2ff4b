#pragma once

#include <array>
#include <cstdint>

#include "spchain/bytes.hpp"
#include "spchain/rng.hpp"

namespace spchain::crypto {

using KeyId = std::uint64_t;

// 256-bit key for XChaCha20-Poly1305.
class SymmetricKey {
 public:
  SymmetricKey() = default;
  explicit SymmetricKey(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

  static SymmetricKey derive(ByteView seed);

  KeyId id() const;
  const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }

  bool operator==(const SymmetricKey&) const = default;

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

enum class Layer : std::uint8_t { Inner, Outer };

// E_institution(E_patient(record)).
struct SealedEmr {
  Bytes ciphertext;
  KeyId patient_key_id = 0;
  KeyId institution_key_id = 0;
  std::uint64_t plaintext_length = 0;
};

// One authenticated layer: nonce(24) || ciphertext || tag(16). The layer name
// is bound as associated data, so a ciphertext only opens at its own layer.
Bytes seal_layer(ByteView plaintext, const SymmetricKey& key, Layer layer, Rng& rng);

// Throws AuthenticationError on any failure; never returns partial plaintext.
Bytes unseal_layer(ByteView sealed, const SymmetricKey& key, Layer layer);

SealedEmr seal_emr(ByteView record, const SymmetricKey& patient_key,
                   const SymmetricKey& institution_key, Rng& rng);

// Strips the institution layer, yielding the patient-layer ciphertext.
Bytes open_outer(const SealedEmr& sealed, const SymmetricKey& institution_key);

}  // namespace spchain::crypto
