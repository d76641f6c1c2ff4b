#pragma once

#include <compare>
#include <cstdint>

#include "spchain/bytes.hpp"
#include "spchain/codec.hpp"

namespace spchain::crypto {

__extension__ typedef unsigned __int128 u128;

struct Scalar {
  std::uint64_t value = 0;
  auto operator<=>(const Scalar&) const = default;
};

// Elements of the source groups and the target group. The toy backend
// represents each group additively as Z_p, so an element is its residue.
struct G1 {
  std::uint64_t value = 0;
  auto operator<=>(const G1&) const = default;
};
struct G2 {
  std::uint64_t value = 0;
  auto operator<=>(const G2&) const = default;
};
struct GT {
  std::uint64_t value = 0;
  auto operator<=>(const GT&) const = default;
};

bool is_prime(std::uint64_t n);

// Symmetric toy pairing over Z_p: G1 = G2 = GT = (Z_p, +) and
// e(X, Y) = X * Y mod p. Bilinear and non-degenerate, with no hardness at all.
// Swap this class for a pairing-friendly curve to get real security.
class BilinearGroup {
 public:
  explicit BilinearGroup(std::uint64_t modulus, G1 g1 = G1{1}, G2 g2 = G2{1});

  // p = 101, the worked-example group.
  static BilinearGroup toy();
  // p = 2^61 - 1, used by the simulator.
  static BilinearGroup mersenne61();

  std::uint64_t modulus() const { return p_; }
  G1 g1() const { return g1_; }
  G2 g2() const { return g2_; }
  unsigned bits() const;
  // Fixed wire width of one element: ceil(bits(p) / 8).
  std::size_t element_width() const { return width_; }

  Scalar scalar(std::uint64_t v) const { return Scalar{v % p_}; }
  Scalar add(Scalar a, Scalar b) const { return Scalar{addmod(a.value, b.value)}; }
  Scalar sub(Scalar a, Scalar b) const { return Scalar{submod(a.value, b.value)}; }
  Scalar mul(Scalar a, Scalar b) const { return Scalar{mulmod(a.value, b.value)}; }
  // Multiplicative inverse; a must be nonzero.
  Scalar inverse(Scalar a) const;

  G1 add(G1 a, G1 b) const { return G1{addmod(a.value, b.value)}; }
  G1 sub(G1 a, G1 b) const { return G1{submod(a.value, b.value)}; }
  G1 mul(Scalar k, G1 x) const { return G1{mulmod(k.value, x.value)}; }
  G2 mul(Scalar k, G2 x) const { return G2{mulmod(k.value, x.value)}; }
  GT mul(Scalar k, GT x) const { return GT{mulmod(k.value, x.value)}; }

  GT pair(G1 x, G2 y) const { return GT{mulmod(x.value, y.value)}; }

  bool in_range(std::uint64_t v) const { return v < p_; }

  // Big-endian bytes interpreted as an integer, reduced mod p.
  Scalar reduce(ByteView bytes) const;

  void write_element(Writer& w, std::uint64_t v) const { w.uint_be(v, width_); }
  // Reads one fixed-width element and rejects non-canonical values >= p.
  std::uint64_t read_element(Reader& r) const;

  bool operator==(const BilinearGroup& other) const {
    return p_ == other.p_ && g1_ == other.g1_ && g2_ == other.g2_;
  }

 private:
  std::uint64_t addmod(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t submod(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : p_ - (b - a); }
  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p_);
  }

  std::uint64_t p_;
  G1 g1_;
  G2 g2_;
  std::size_t width_;
};

}  // namespace spchain::crypto
