#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "spchain/bytes.hpp"

namespace spchain::node {

// Institution-side ciphertext store. Pointer = hex of the content hash.
class OffChainStore {
 public:
  std::string put(ByteView data);
  // Throws if the pointer is unknown.
  const Bytes& get(const std::string& pointer) const;
  bool contains(const std::string& pointer) const { return blobs_.count(pointer) != 0; }

  std::size_t size() const { return blobs_.size(); }
  std::uint64_t reads() const { return reads_; }
  const std::map<std::string, Bytes>& blobs() const { return blobs_; }

  // Fault injection: the next put fails.
  void fail_next_put() { fail_next_ = true; }

 private:
  std::map<std::string, Bytes> blobs_;
  mutable std::uint64_t reads_ = 0;
  bool fail_next_ = false;
};

}  // namespace spchain::node
