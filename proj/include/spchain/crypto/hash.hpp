#pragma once

#include <initializer_list>

#include "spchain/bytes.hpp"

namespace spchain::crypto {

Hash32 sha256(ByteView data);

// SHA-256 of the concatenation of all parts.
Hash32 sha256(std::initializer_list<ByteView> parts);

}  // namespace spchain::crypto
