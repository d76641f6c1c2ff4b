#pragma once

#include <optional>
#include <vector>

#include "spchain/ledger/pin.hpp"

namespace spchain::consensus {

using ledger::ConsensusGroup;
using ledger::MinerId;
using ledger::PinCertificate;

struct Candidate {
  MinerId id;
  crypto::PublicKey key{};
  double reputation = 0.0;
};

// Top-X by reputation, ties by id ascending; weights are the reputations.
// A group whose reputations are all zero falls back to weight 1 each.
ConsensusGroup select_group(std::vector<Candidate> candidates, std::size_t x, std::uint64_t epoch);

struct Vote {
  MinerId signer;
  crypto::Signature signature{};
};

struct PinAudit {
  std::vector<MinerId> non_members;
  std::vector<MinerId> bad_signatures;
  std::size_t duplicates = 0;
};

struct PinOutcome {
  std::optional<PinCertificate> certificate;  // empty: insufficient
  std::size_t count = 0;                      // distinct valid member votes
  double weight = 0.0;                        // their summed weight
  PinAudit audit;

  bool pinned() const { return certificate.has_value(); }
};

PinOutcome pin(const Hash32& subject, const std::vector<Vote>& votes, const ConsensusGroup& group);

Vote cast_vote(const MinerId& id, const crypto::SigningKey& key, const Hash32& subject);

}  // namespace spchain::consensus
