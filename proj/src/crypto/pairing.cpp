#include "spchain/crypto/pairing.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace spchain::crypto {

namespace {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  u128 result = 1;
  u128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are deterministic for all 64-bit n.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

BilinearGroup::BilinearGroup(std::uint64_t modulus, G1 g1, G2 g2) : p_(modulus), g1_(g1), g2_(g2) {
  if (modulus < 5) throw std::invalid_argument("degenerate group: modulus must be at least 5");
  if (!is_prime(modulus)) throw std::invalid_argument("group modulus " + std::to_string(modulus) + " is not prime");
  if (g1.value == 0 || g1.value >= p_ || g2.value == 0 || g2.value >= p_) {
    throw std::invalid_argument("generators must be nonzero residues mod p");
  }
  width_ = (bits() + 7) / 8;
}

BilinearGroup BilinearGroup::toy() { return BilinearGroup(101); }

BilinearGroup BilinearGroup::mersenne61() { return BilinearGroup((1ULL << 61) - 1); }

unsigned BilinearGroup::bits() const { return static_cast<unsigned>(std::bit_width(p_)); }

std::uint64_t BilinearGroup::addmod(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t s = a + b;
  if (s < a || s >= p_) s -= p_;
  return s;
}

Scalar BilinearGroup::inverse(Scalar a) const {
  if (a.value % p_ == 0) throw std::domain_error("zero has no inverse mod p");
  return Scalar{powmod(a.value, p_ - 2, p_)};
}

Scalar BilinearGroup::reduce(ByteView bytes) const {
  u128 acc = 0;
  for (auto b : bytes) acc = ((acc << 8) | b) % p_;
  return Scalar{static_cast<std::uint64_t>(acc)};
}

std::uint64_t BilinearGroup::read_element(Reader& r) const {
  std::size_t at = r.offset();
  std::uint64_t v = r.uint_be(width_);
  if (v >= p_) r.fail_at(at, "group element out of range");
  return v;
}

}  // namespace spchain::crypto
