#include "spchain/crypto/chameleon.hpp"

#include <stdexcept>

#include "spchain/codec.hpp"
#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"

namespace spchain::crypto {

namespace {

Scalar draw_nonzero(const BilinearGroup& group, Rng& rng) {
  for (;;) {
    auto v = rng.uniform_below(group.modulus());
    if (v != 0) return Scalar{v};
  }
}

}  // namespace

Bytes TransparentProofBackend::prove(const HashKey& hk, G1 /*h*/, Scalar m, G1 witness) const {
  Writer w;
  w.u8(kTag);
  hk.group.write_element(w, witness.value);
  hk.group.write_element(w, m.value);
  return std::move(w).bytes();
}

std::optional<G1> TransparentProofBackend::witness(const BilinearGroup& group, ByteView proof) {
  if (proof.size() != 1 + 2 * group.element_width() || proof[0] != kTag) return std::nullopt;
  try {
    Reader r(proof.subspan(1));
    return G1{group.read_element(r)};
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

std::optional<Scalar> TransparentProofBackend::bound_message(const BilinearGroup& group, ByteView proof) const {
  if (proof.size() != 1 + 2 * group.element_width() || proof[0] != kTag) return std::nullopt;
  try {
    Reader r(proof.subspan(1 + group.element_width()));
    return Scalar{group.read_element(r)};
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

bool TransparentProofBackend::verify(const HashKey& hk, G1 h, Scalar m, ByteView proof) const {
  const auto& group = hk.group;
  auto R = witness(group, proof);
  auto bound = bound_message(group, proof);
  if (!R || !bound || *bound != m || !group.in_range(h.value) || !group.in_range(m.value)) return false;
  // e(h - m*h2, g2) == e(R, h1_hat)
  G1 lhs_point = group.sub(h, group.mul(m, hk.h2));
  return group.pair(lhs_point, group.g2()) == group.pair(*R, hk.h1_hat);
}

const ProofBackend& transparent_backend() {
  static const TransparentProofBackend backend;
  return backend;
}

ChameleonKeys ch_keys_from_trapdoor(const BilinearGroup& group, Scalar x, G1 h2) {
  if (x.value % group.modulus() == 0) throw std::invalid_argument("trapdoor must be invertible (nonzero mod p)");
  if (h2.value == 0 || !group.in_range(h2.value)) throw std::invalid_argument("h2 must be a nonzero element of G1");
  return ChameleonKeys{HashKey{group, group.mul(x, group.g1()), group.mul(x, group.g2()), h2, {}}, Trapdoor{x}};
}

ChameleonKeys ch_keygen(unsigned security_bits, const BilinearGroup& group, Rng& rng) {
  if (security_bits == 0) throw std::invalid_argument("security parameter must be positive");
  if (group.bits() < security_bits) {
    throw std::invalid_argument("group of " + std::to_string(group.bits()) + " bits is below security parameter " +
                                std::to_string(security_bits));
  }
  Scalar x = draw_nonzero(group, rng);
  G1 h2{draw_nonzero(group, rng).value};
  return ch_keys_from_trapdoor(group, x, h2);
}

ChameleonDigest ch_hash(const HashKey& hk, Scalar m, Scalar r, const ProofBackend& backend) {
  const auto& group = hk.group;
  if (!group.in_range(m.value)) throw std::invalid_argument("message must be reduced mod p");
  if (r.value % group.modulus() == 0) throw std::invalid_argument("chameleon randomness must be nonzero");
  G1 h = group.add(group.mul(r, hk.h1), group.mul(m, hk.h2));
  G1 R = group.mul(r, group.g1());
  return ChameleonDigest{h, backend.prove(hk, h, m, R), m};
}

ChameleonDigest ch_hash(const HashKey& hk, Scalar m, Rng& rng, const ProofBackend& backend) {
  return ch_hash(hk, m, draw_nonzero(hk.group, rng), backend);
}

bool ch_verify(const HashKey& hk, Scalar m, const ChameleonDigest& digest, const ProofBackend& backend) {
  return backend.verify(hk, digest.h, m, digest.proof);
}

ChameleonDigest ch_collide(const Trapdoor& tk, const HashKey& hk, const ChameleonDigest& old, Scalar m_new,
                           const ProofBackend& backend) {
  const auto& group = hk.group;
  if (!ch_verify(hk, old.message, old, backend)) throw Error("invalid source digest");
  if (!group.in_range(m_new.value)) throw std::invalid_argument("message must be reduced mod p");
  // R' = x^-1 * (h - m'*h2)
  G1 shifted = group.sub(old.h, group.mul(m_new, hk.h2));
  G1 R_new = group.mul(group.inverse(tk.x), shifted);
  ChameleonDigest out{old.h, backend.prove(hk, old.h, m_new, R_new), m_new};
  if (!ch_verify(hk, m_new, out, backend)) throw Error("trapdoor does not match hash key");
  return out;
}

Scalar message_scalar(const BilinearGroup& group, ByteView data) { return group.reduce(sha256(data)); }

void write_digest(Writer& w, const ChameleonDigest& digest, const BilinearGroup& group) {
  group.write_element(w, digest.h.value);
  w.blob(digest.proof);
}

Bytes encode_digest(const ChameleonDigest& digest, const BilinearGroup& group) {
  Writer w;
  write_digest(w, digest, group);
  return std::move(w).bytes();
}

ChameleonDigest read_digest(Reader& r, const BilinearGroup& group, const ProofBackend& backend) {
  ChameleonDigest d;
  d.h = G1{group.read_element(r)};
  auto proof = r.blob();
  d.proof.assign(proof.begin(), proof.end());
  d.message = backend.bound_message(group, d.proof).value_or(Scalar{0});
  return d;
}

ChameleonDigest decode_digest(ByteView data, const BilinearGroup& group, const ProofBackend& backend) {
  Reader r(data);
  auto d = read_digest(r, group, backend);
  r.expect_end();
  return d;
}

void write_hash_key(Writer& w, const HashKey& hk) {
  const auto& g = hk.group;
  w.u64(g.modulus());
  w.u64(g.g1().value);
  w.u64(g.g2().value);
  g.write_element(w, hk.h1.value);
  g.write_element(w, hk.h1_hat.value);
  g.write_element(w, hk.h2.value);
  w.blob(hk.crs);
}

HashKey read_hash_key(Reader& r) {
  std::size_t at = r.offset();
  std::uint64_t p = r.u64();
  std::uint64_t g1 = r.u64();
  std::uint64_t g2 = r.u64();
  std::optional<BilinearGroup> group;
  try {
    group.emplace(p, G1{g1}, G2{g2});
  } catch (const std::exception& e) {
    r.fail_at(at, e.what());
  }
  HashKey hk{*group, {}, {}, {}, {}};
  hk.h1 = G1{group->read_element(r)};
  hk.h1_hat = G2{group->read_element(r)};
  hk.h2 = G1{group->read_element(r)};
  auto crs = r.blob();
  hk.crs.assign(crs.begin(), crs.end());
  return hk;
}

}  // namespace spchain::crypto
