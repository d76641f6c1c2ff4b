#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <utility>

#include "spchain/bytes.hpp"
#include "spchain/error.hpp"

namespace spchain {

// Canonical big-endian writer. Every variable-length field is prefixed with
// its length as a 4-byte big-endian integer.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { uint_be(v, 4); }
  void u64(std::uint64_t v) { uint_be(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void uint_be(std::uint64_t v, std::size_t width) {
    for (std::size_t i = width; i-- > 0;) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }
  void blob(ByteView data) {
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
  }
  void str(std::string_view s) { blob(as_view(s)); }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView data, std::size_t base_offset = 0) : data_(data), base_(base_offset) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(uint_be(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint_be(4)); }
  std::uint64_t u64() { return uint_be(8); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::uint64_t uint_be(std::size_t width) {
    need(width, "integer");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += width;
    return v;
  }

  ByteView raw(std::size_t n) {
    need(n, "field");
    auto view = data_.subspan(pos_, n);
    pos_ += n;
    return view;
  }

  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    auto view = raw(N);
    std::array<std::uint8_t, N> out{};
    std::memcpy(out.data(), view.data(), N);
    return out;
  }

  ByteView blob() {
    std::size_t at = offset();
    std::uint32_t n = u32();
    if (n > remaining()) throw DecodeError(at, "length prefix exceeds input");
    return raw(n);
  }

  std::string str() {
    auto view = blob();
    return std::string(view.begin(), view.end());
  }

  bool flag() {
    std::size_t at = offset();
    auto v = u8();
    if (v > 1) throw DecodeError(at, "boolean byte must be 0 or 1");
    return v == 1;
  }

  std::size_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void expect_end() const {
    if (pos_ != data_.size()) throw DecodeError(offset(), "trailing bytes");
  }

  [[noreturn]] void fail(const std::string& what) const { throw DecodeError(offset(), what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const { throw DecodeError(at, what); }

 private:
  void need(std::size_t n, const char* what) const {
    if (n > remaining()) throw DecodeError(offset(), std::string("truncated ") + what);
  }

  ByteView data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace spchain
