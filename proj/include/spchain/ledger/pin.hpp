#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "spchain/bytes.hpp"
#include "spchain/codec.hpp"
#include "spchain/ledger/transaction.hpp"

namespace spchain::ledger {

struct GroupMember {
  MinerId id;
  PublicKey key{};
  double weight = 0.0;  // reputation R frozen at epoch start
  bool operator==(const GroupMember&) const = default;
};

// Consensus members for one epoch (one keyblock round).
struct ConsensusGroup {
  std::uint64_t epoch = 0;
  std::vector<GroupMember> members;

  std::size_t size() const { return members.size(); }
  double total_weight() const;
  const GroupMember* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
};

struct PinSignature {
  MinerId signer;
  double weight = 0.0;
  Signature signature{};
  bool operator==(const PinSignature&) const = default;
};

struct PinCertificate {
  Hash32 subject{};
  std::uint64_t epoch = 0;
  std::uint32_t group_size = 0;
  double group_weight = 0.0;
  std::vector<PinSignature> signatures;  // sorted by signer id

  double signer_weight() const;
  bool operator==(const PinCertificate&) const = default;
};

// ceil(2n/3)
std::size_t count_threshold(std::size_t group_size);

// At least ceil(2n/3) signers AND signer weight strictly above 2/3 of the group weight.
bool quorum_met(std::size_t signers, std::size_t group_size, double signer_weight, double group_weight);

// Message a member signs to vote for `subject`.
Bytes pin_message(const Hash32& subject);

enum class CertStatus {
  Valid,
  WrongSubject,
  EpochMismatch,
  UnknownSigner,
  DuplicateSigner,
  WeightMismatch,
  BadSignature,
  NoQuorum,
};

std::string_view to_string(CertStatus status);

// Re-derives the quorum from the group itself; claimed weights must match it.
CertStatus check_certificate(const PinCertificate& cert, const Hash32& subject, const ConsensusGroup& group);

void write_certificate(Writer& w, const PinCertificate& cert);
PinCertificate read_certificate(Reader& r);

}  // namespace spchain::ledger
