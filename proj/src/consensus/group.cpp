#include "spchain/consensus/group.hpp"

#include <algorithm>
#include <set>

#include "spchain/error.hpp"

namespace spchain::consensus {

ConsensusGroup select_group(std::vector<Candidate> candidates, std::size_t x, std::uint64_t epoch) {
  if (x == 0) throw Error("group size must be at least 1");
  if (candidates.size() < x) throw Error("fewer miners than group size");
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.reputation != b.reputation) return a.reputation > b.reputation;
    return a.id < b.id;
  });
  candidates.resize(x);
  bool all_zero = std::all_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.reputation <= 0; });
  ConsensusGroup g;
  g.epoch = epoch;
  for (const auto& c : candidates) g.members.push_back({c.id, c.key, all_zero ? 1.0 : c.reputation});
  // certificates list signers by id; keep the group in the same order
  std::sort(g.members.begin(), g.members.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return g;
}

PinOutcome pin(const Hash32& subject, const std::vector<Vote>& votes, const ConsensusGroup& group) {
  PinOutcome out;
  auto msg = ledger::pin_message(subject);
  std::set<MinerId> seen;
  std::vector<ledger::PinSignature> sigs;
  for (const auto& v : votes) {
    const auto* m = group.find(v.signer);
    if (m == nullptr) {
      out.audit.non_members.push_back(v.signer);
      continue;
    }
    if (seen.count(v.signer)) {
      ++out.audit.duplicates;
      continue;
    }
    if (!crypto::verify_sig(msg, v.signature, m->key)) {
      out.audit.bad_signatures.push_back(v.signer);
      continue;
    }
    seen.insert(v.signer);
    sigs.push_back({m->id, m->weight, v.signature});
  }
  out.count = sigs.size();
  std::sort(sigs.begin(), sigs.end(), [](const auto& a, const auto& b) { return a.signer < b.signer; });
  // sum in id order so the certificate's weight matches a recomputation exactly
  out.weight = 0;
  for (const auto& s : sigs) out.weight += s.weight;
  if (!ledger::quorum_met(out.count, group.size(), out.weight, group.total_weight())) return out;
  PinCertificate cert;
  cert.subject = subject;
  cert.epoch = group.epoch;
  cert.group_size = static_cast<std::uint32_t>(group.size());
  cert.group_weight = group.total_weight();
  cert.signatures = std::move(sigs);
  out.certificate = std::move(cert);
  return out;
}

Vote cast_vote(const MinerId& id, const crypto::SigningKey& key, const Hash32& subject) {
  return Vote{id, key.sign(ledger::pin_message(subject))};
}

}  // namespace spchain::consensus
