#pragma once

#include "spchain/bytes.hpp"
#include "spchain/ledger/block.hpp"

namespace spchain::ledger {

// Canonical block encoding: a one-byte kind tag, then fields in fixed order,
// integers big-endian fixed width, lists and variable fields length-prefixed.
// Decoding is strict: every accepted input re-encodes to itself.
inline constexpr std::uint8_t kKeyBlockTag = 0x01;
inline constexpr std::uint8_t kMicroBlockTag = 0x02;

Bytes encode_keyblock(const KeyBlock& block, bool include_pin = true);
Bytes encode_microblock(const MicroBlock& block, const crypto::BilinearGroup& group);
Bytes encode_block(const Block& block, const crypto::BilinearGroup& group);

Block decode_block(ByteView data, const crypto::BilinearGroup& group);
KeyBlock decode_keyblock(ByteView data, const crypto::BilinearGroup& group);
MicroBlock decode_microblock(ByteView data, const crypto::BilinearGroup& group);

}  // namespace spchain::ledger
