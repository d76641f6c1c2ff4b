#include "spchain/ledger/merkle.hpp"

#include <stdexcept>
#include <vector>

#include "spchain/crypto/hash.hpp"

namespace spchain::ledger {

Hash32 merkle_top(std::span<const Bytes> leaves) {
  if (leaves.empty()) throw std::invalid_argument("institution root needs at least one leaf");
  std::vector<Hash32> level;
  level.reserve(leaves.size() + 1);
  for (const auto& leaf : leaves) level.push_back(crypto::sha256(leaf));
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Hash32> next;
    next.reserve(level.size() / 2 + 1);
    for (std::size_t i = 0; i < level.size(); i += 2) next.push_back(crypto::sha256({level[i], level[i + 1]}));
    level = std::move(next);
  }
  return level.front();
}

crypto::Scalar root_message(std::span<const Bytes> leaves, const crypto::BilinearGroup& group) {
  return group.reduce(merkle_top(leaves));
}

crypto::ChameleonDigest institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk,
                                         crypto::Scalar randomness) {
  return crypto::ch_hash(hk, root_message(leaves, hk.group), randomness);
}

crypto::ChameleonDigest institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk, Rng& rng) {
  return crypto::ch_hash(hk, root_message(leaves, hk.group), rng);
}

bool verify_institution_root(std::span<const Bytes> leaves, const crypto::HashKey& hk,
                             const crypto::ChameleonDigest& root) {
  if (leaves.empty()) return false;
  auto m = root_message(leaves, hk.group);
  return root.message == m && crypto::ch_verify(hk, m, root);
}

crypto::ChameleonDigest redact_institution_root(const crypto::Trapdoor& tk, const crypto::HashKey& hk,
                                                const crypto::ChameleonDigest& root,
                                                std::span<const Bytes> new_leaves) {
  return crypto::ch_collide(tk, hk, root, root_message(new_leaves, hk.group));
}

}  // namespace spchain::ledger
