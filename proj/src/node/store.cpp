#include "spchain/node/store.hpp"

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"

namespace spchain::node {

std::string OffChainStore::put(ByteView data) {
  if (fail_next_) {
    fail_next_ = false;
    throw Error("off-chain store write failed");
  }
  auto pointer = to_hex(crypto::sha256(data));
  blobs_.emplace(pointer, Bytes(data.begin(), data.end()));
  return pointer;
}

const Bytes& OffChainStore::get(const std::string& pointer) const {
  ++reads_;
  auto it = blobs_.find(pointer);
  if (it == blobs_.end()) throw Error("unknown off-chain pointer " + pointer);
  return it->second;
}

}  // namespace spchain::node
