#pragma once

#include <span>

#include "spchain/bytes.hpp"
#include "spchain/crypto/chameleon.hpp"
#include "spchain/rng.hpp"

namespace spchain::ledger {

// Binary Merkle tree over SHA-256(leaf). A level of odd width duplicates its
// last digest; parents are SHA-256(left || right).
Hash32 merkle_top(std::span<const Bytes> leaves);

// The top digest as a chameleon message.
crypto::Scalar root_message(std::span<const Bytes> leaves, const crypto::BilinearGroup& group);

// Chameleon-hashes the Merkle top. Throws on an empty leaf list.
crypto::ChameleonDigest institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk,
                                         crypto::Scalar randomness);
crypto::ChameleonDigest institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk, Rng& rng);

bool verify_institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk,
                             const crypto::ChameleonDigest& root);

// Re-points an existing root at a new leaf list without changing h.
crypto::ChameleonDigest redact_institution_root(const crypto::Trapdoor& tk, const crypto::HashKey& hk,
                                                const crypto::ChameleonDigest& root,
                                                std::span<const Bytes> new_leaves);

}  // namespace spchain::ledger
