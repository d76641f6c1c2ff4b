#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

inline ByteView as_view(std::string_view text) {
  return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

// Abbreviated hex for logs and ids.
std::string short_hex(ByteView data, std::size_t bytes = 6);

}  // namespace spchain
