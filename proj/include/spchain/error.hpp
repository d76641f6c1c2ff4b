#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spchain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AuthenticationError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : Error("decode error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace spchain
