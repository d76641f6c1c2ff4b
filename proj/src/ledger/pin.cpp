#include "spchain/ledger/pin.hpp"

#include <algorithm>
#include <set>

#include "spchain/crypto/signature.hpp"

namespace spchain::ledger {

double ConsensusGroup::total_weight() const {
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  return total;
}

const GroupMember* ConsensusGroup::find(std::string_view id) const {
  auto it = std::find_if(members.begin(), members.end(), [&](const GroupMember& m) { return m.id == id; });
  return it == members.end() ? nullptr : &*it;
}

double PinCertificate::signer_weight() const {
  double total = 0.0;
  for (const auto& s : signatures) total += s.weight;
  return total;
}

std::size_t count_threshold(std::size_t group_size) { return (2 * group_size + 2) / 3; }

bool quorum_met(std::size_t signers, std::size_t group_size, double signer_weight, double group_weight) {
  return signers >= count_threshold(group_size) && 3.0 * signer_weight > 2.0 * group_weight;
}

Bytes pin_message(const Hash32& subject) {
  Writer w;
  w.raw(as_view("spchain-pin-v1"));
  w.raw(subject);
  return std::move(w).bytes();
}

std::string_view to_string(CertStatus status) {
  switch (status) {
    case CertStatus::Valid: return "valid";
    case CertStatus::WrongSubject: return "wrong-subject";
    case CertStatus::EpochMismatch: return "epoch-mismatch";
    case CertStatus::UnknownSigner: return "unknown-signer";
    case CertStatus::DuplicateSigner: return "duplicate-signer";
    case CertStatus::WeightMismatch: return "weight-mismatch";
    case CertStatus::BadSignature: return "bad-signature";
    case CertStatus::NoQuorum: return "no-quorum";
  }
  return "unknown";
}

CertStatus check_certificate(const PinCertificate& cert, const Hash32& subject, const ConsensusGroup& group) {
  if (cert.subject != subject) return CertStatus::WrongSubject;
  if (cert.epoch != group.epoch) return CertStatus::EpochMismatch;
  auto msg = pin_message(subject);
  std::set<std::string_view> seen;
  double weight = 0.0;
  for (const auto& s : cert.signatures) {
    const auto* member = group.find(s.signer);
    if (member == nullptr) return CertStatus::UnknownSigner;
    if (!seen.insert(s.signer).second) return CertStatus::DuplicateSigner;
    if (s.weight != member->weight) return CertStatus::WeightMismatch;
    if (!crypto::verify_sig(msg, s.signature, member->key)) return CertStatus::BadSignature;
    weight += member->weight;
  }
  if (!quorum_met(seen.size(), group.size(), weight, group.total_weight())) return CertStatus::NoQuorum;
  return CertStatus::Valid;
}

void write_certificate(Writer& w, const PinCertificate& cert) {
  w.raw(cert.subject);
  w.u64(cert.epoch);
  w.u32(cert.group_size);
  w.f64(cert.group_weight);
  w.u32(static_cast<std::uint32_t>(cert.signatures.size()));
  for (const auto& s : cert.signatures) {
    w.str(s.signer);
    w.f64(s.weight);
    w.raw(s.signature);
  }
}

PinCertificate read_certificate(Reader& r) {
  PinCertificate cert;
  cert.subject = r.fixed<32>();
  cert.epoch = r.u64();
  cert.group_size = r.u32();
  cert.group_weight = r.f64();
  std::size_t count_at = r.offset();
  auto n = r.u32();
  // Each signature needs at least 4 + 8 + 64 bytes.
  if (n > r.remaining() / 76) r.fail_at(count_at, "signature count exceeds input");
  cert.signatures.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    PinSignature s;
    s.signer = r.str();
    s.weight = r.f64();
    s.signature = r.fixed<64>();
    cert.signatures.push_back(std::move(s));
  }
  return cert;
}

}  // namespace spchain::ledger
