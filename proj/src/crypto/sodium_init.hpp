#pragma once

#include <sodium.h>

#include "spchain/error.hpp"

namespace spchain::crypto::detail {

inline void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw Error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
}

}  // namespace spchain::crypto::detail
