#pragma once

#include <optional>

#include "spchain/bytes.hpp"
#include "spchain/crypto/pairing.hpp"
#include "spchain/rng.hpp"

namespace spchain::crypto {

// Public hash key hk = (h1, h1_hat, h2, crs).
struct HashKey {
  BilinearGroup group;
  G1 h1;
  G2 h1_hat;
  G1 h2;
  Bytes crs;

  bool operator==(const HashKey&) const = default;
};

// Trapdoor tk = (x). Never leaves the institution that generated it.
struct Trapdoor {
  Scalar x;
};

struct ChameleonKeys {
  HashKey hash_key;
  Trapdoor trapdoor;
};

// Digest h with proof pi. `message` is the Z_p element the proof binds;
// the transparent backend carries it inside pi as well.
struct ChameleonDigest {
  G1 h;
  Bytes proof;
  Scalar message;

  bool operator==(const ChameleonDigest&) const = default;
};

// Proves knowledge of a witness R with e(h - m*h2, g2) = e(R, h1_hat).
class ProofBackend {
 public:
  virtual ~ProofBackend() = default;

  virtual Bytes prove(const HashKey& hk, G1 h, Scalar m, G1 witness) const = 0;
  // Must return false, never throw, on malformed proofs.
  virtual bool verify(const HashKey& hk, G1 h, Scalar m, ByteView proof) const = 0;
  virtual std::optional<Scalar> bound_message(const BilinearGroup& group, ByteView proof) const = 0;
};

// pi = 0x01 || R || m, verified by evaluating the pairing equation directly.
// Reveals R, so it is binding but not zero-knowledge.
class TransparentProofBackend final : public ProofBackend {
 public:
  static constexpr std::uint8_t kTag = 0x01;

  Bytes prove(const HashKey& hk, G1 h, Scalar m, G1 witness) const override;
  bool verify(const HashKey& hk, G1 h, Scalar m, ByteView proof) const override;
  std::optional<Scalar> bound_message(const BilinearGroup& group, ByteView proof) const override;

  // Extracts R from a well-formed transparent proof.
  static std::optional<G1> witness(const BilinearGroup& group, ByteView proof);
};

const ProofBackend& transparent_backend();

// HGen. Draws x uniformly from Z_p \ {0} and h2 uniformly from G1 \ {0}.
// Throws for p < 5 or when bits(p) is below security_bits.
ChameleonKeys ch_keygen(unsigned security_bits, const BilinearGroup& group, Rng& rng);

// Deterministic key construction from a chosen trapdoor.
ChameleonKeys ch_keys_from_trapdoor(const BilinearGroup& group, Scalar x, G1 h2);

// h = r*h1 + m*h2, R = r*g. r must be nonzero.
ChameleonDigest ch_hash(const HashKey& hk, Scalar m, Scalar r,
                        const ProofBackend& backend = transparent_backend());
ChameleonDigest ch_hash(const HashKey& hk, Scalar m, Rng& rng,
                        const ProofBackend& backend = transparent_backend());

bool ch_verify(const HashKey& hk, Scalar m, const ChameleonDigest& digest,
               const ProofBackend& backend = transparent_backend());

// Finds R' = x^-1 * (h - m_new*h2) for the same h and proves it for m_new.
ChameleonDigest ch_collide(const Trapdoor& tk, const HashKey& hk, const ChameleonDigest& old,
                           Scalar m_new, const ProofBackend& backend = transparent_backend());

// Maps arbitrary bytes into Z_p: SHA-256, read big-endian, reduced mod p.
Scalar message_scalar(const BilinearGroup& group, ByteView data);

// Wire format: h || len(pi) as u32 big-endian || pi.
Bytes encode_digest(const ChameleonDigest& digest, const BilinearGroup& group);
void write_digest(Writer& w, const ChameleonDigest& digest, const BilinearGroup& group);
ChameleonDigest read_digest(Reader& r, const BilinearGroup& group,
                            const ProofBackend& backend = transparent_backend());
ChameleonDigest decode_digest(ByteView data, const BilinearGroup& group,
                              const ProofBackend& backend = transparent_backend());

void write_hash_key(Writer& w, const HashKey& hk);
HashKey read_hash_key(Reader& r);

}  // namespace spchain::crypto
