#include "spchain/ledger/transaction.hpp"

#include <algorithm>
#include <stdexcept>

#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"

namespace spchain::ledger {

namespace {

constexpr std::string_view kTxDomain = "spchain-tx-v1";

void write_medical(Writer& w, const MedicalPayload& m, const crypto::BilinearGroup& group) {
  w.raw(m.institution);
  crypto::write_digest(w, m.record, group);
  w.str(m.pointer);
}

MedicalPayload read_medical(Reader& r, const crypto::BilinearGroup& group) {
  MedicalPayload m;
  m.institution = r.fixed<32>();
  m.record = crypto::read_digest(r, group);
  m.pointer = r.str();
  return m;
}

}  // namespace

std::string_view to_string(TxType type) {
  switch (type) {
    case TxType::Register: return "register";
    case TxType::Medical: return "medical";
    case TxType::Label: return "label";
  }
  return "unknown";
}

const MedicalPayload* Transaction::record() const {
  if (auto* m = std::get_if<MedicalPayload>(&payload_)) return m;
  if (auto* l = std::get_if<LabelPayload>(&payload_)) return &l->corrected;
  return nullptr;
}

const Hash32* Transaction::label_target() const {
  auto* l = std::get_if<LabelPayload>(&payload_);
  return l ? &l->target : nullptr;
}

const RegisterPayload* Transaction::registration() const { return std::get_if<RegisterPayload>(&payload_); }

Bytes Transaction::signing_message() const {
  const std::size_t body = encoded_.size() - signature_.size();
  Bytes msg(kTxDomain.size() + body);
  std::copy(kTxDomain.begin(), kTxDomain.end(), msg.begin());
  std::copy_n(encoded_.begin(), body, msg.begin() + static_cast<std::ptrdiff_t>(kTxDomain.size()));
  return msg;
}

bool Transaction::signature_valid() const { return crypto::verify_sig(signing_message(), signature_, sender_); }

void Transaction::seal(const crypto::BilinearGroup& group) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(type_));
  w.raw(sender_);
  w.u64(round_);
  w.u64(static_cast<std::uint64_t>(fee_));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RegisterPayload>) {
          w.raw(p.identity_digest);
        } else if constexpr (std::is_same_v<T, MedicalPayload>) {
          write_medical(w, p, group);
        } else {
          w.raw(p.target);
          write_medical(w, p.corrected, group);
        }
      },
      payload_);
  w.raw(signature_);
  encoded_ = std::move(w).bytes();
  id_ = crypto::sha256(encoded_);
}

Transaction build_tx(TxType type, const TxFields& fields, std::uint64_t round, Amount fee,
                     const crypto::SigningKey& signer, const crypto::BilinearGroup& group,
                     const crypto::HashKey* record_key) {
  if (fee < 0) throw std::invalid_argument("fee must be non-negative");
  Transaction tx;
  tx.type_ = type;
  tx.sender_ = signer.public_key();
  tx.round_ = round;
  tx.fee_ = fee;

  auto medical = [&]() {
    if (!fields.institution || !fields.record) throw Error("record transaction requires institution and digest");
    if (record_key == nullptr) throw Error("record transaction requires the issuing hash key");
    if (!crypto::ch_verify(*record_key, fields.record->message, *fields.record)) {
      throw Error("chameleon proof does not verify");
    }
    return MedicalPayload{*fields.institution, *fields.record, fields.pointer};
  };

  switch (type) {
    case TxType::Register:
      if (!fields.identity_digest) throw Error("register transaction requires an identity digest");
      tx.payload_ = RegisterPayload{*fields.identity_digest};
      break;
    case TxType::Medical:
      tx.payload_ = medical();
      break;
    case TxType::Label:
      if (!fields.target) throw Error("label transaction requires targetTxHash");
      tx.payload_ = LabelPayload{*fields.target, medical()};
      break;
    default:
      throw std::invalid_argument("unknown transaction type");
  }

  // Sign the body (encoding with a zero signature minus the signature bytes).
  tx.seal(group);
  tx.signature_ = signer.sign(tx.signing_message());
  tx.seal(group);
  return tx;
}

Transaction read_tx_body(Reader& r, const crypto::BilinearGroup& group) {
  Transaction tx;
  std::size_t type_at = r.offset();
  auto type = r.u8();
  if (type < 1 || type > 3) r.fail_at(type_at, "unknown transaction type " + std::to_string(type));
  tx.type_ = static_cast<TxType>(type);
  tx.sender_ = r.fixed<32>();
  tx.round_ = r.u64();
  tx.fee_ = static_cast<Amount>(r.u64());
  switch (tx.type_) {
    case TxType::Register:
      tx.payload_ = RegisterPayload{r.fixed<32>()};
      break;
    case TxType::Medical:
      tx.payload_ = read_medical(r, group);
      break;
    case TxType::Label: {
      auto target = r.fixed<32>();
      tx.payload_ = LabelPayload{target, read_medical(r, group)};
      break;
    }
  }
  tx.signature_ = r.fixed<64>();
  tx.seal(group);
  return tx;
}

Transaction decode_tx(ByteView data, const crypto::BilinearGroup& group) {
  Reader r(data);
  auto tx = read_tx_body(r, group);
  r.expect_end();
  return tx;
}

Hash32 identity_digest(std::initializer_list<std::string_view> fields) {
  std::string joined;
  bool first = true;
  for (auto f : fields) {
    if (!first) joined.push_back('|');
    joined.append(f);
    first = false;
  }
  return crypto::sha256(as_view(joined));
}

}  // namespace spchain::ledger
