#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "spchain/bytes.hpp"
#include "spchain/codec.hpp"
#include "spchain/crypto/chameleon.hpp"
#include "spchain/crypto/signature.hpp"

namespace spchain::ledger {

using crypto::PublicKey;
using crypto::Signature;
using MinerId = std::string;

// Fees and rewards are integer micro-coins so that splits conserve exactly.
using Amount = std::int64_t;
inline constexpr Amount kCoin = 1'000'000;

enum class TxType : std::uint8_t { Register = 1, Medical = 2, Label = 3 };

std::string_view to_string(TxType type);

struct RegisterPayload {
  Hash32 identity_digest{};
  bool operator==(const RegisterPayload&) const = default;
};

struct MedicalPayload {
  PublicKey institution{};          // whose hash key produced `record`
  crypto::ChameleonDigest record;   // over the doubly sealed EMR bytes
  std::string pointer;              // off-chain locator in the institution's store
  bool operator==(const MedicalPayload&) const = default;
};

struct LabelPayload {
  Hash32 target{};  // txId of the labeled medical (or label) transaction
  MedicalPayload corrected;
  bool operator==(const LabelPayload&) const = default;
};

using TxPayload = std::variant<RegisterPayload, MedicalPayload, LabelPayload>;

// Loose field bag accepted by build_tx; which fields are required depends on the type.
struct TxFields {
  std::optional<Hash32> identity_digest;
  std::optional<PublicKey> institution;
  std::optional<crypto::ChameleonDigest> record;
  std::string pointer;
  std::optional<Hash32> target;
};

// Immutable signed transaction. The canonical encoding is computed once at
// construction and the id is its SHA-256.
class Transaction {
 public:
  TxType type() const { return type_; }
  const PublicKey& sender() const { return sender_; }
  std::uint64_t round() const { return round_; }
  Amount fee() const { return fee_; }
  const TxPayload& payload() const { return payload_; }
  const Signature& signature() const { return signature_; }
  const Hash32& id() const { return id_; }
  const Bytes& encoded() const { return encoded_; }

  // The record-carrying part of a Medical or Label transaction.
  const MedicalPayload* record() const;
  const Hash32* label_target() const;
  const RegisterPayload* registration() const;

  // Bytes covered by the sender signature.
  Bytes signing_message() const;
  bool signature_valid() const;

  bool operator==(const Transaction& other) const { return encoded_ == other.encoded_; }

 private:
  friend Transaction build_tx(TxType, const TxFields&, std::uint64_t, Amount, const crypto::SigningKey&,
                              const crypto::BilinearGroup&, const crypto::HashKey*);
  friend Transaction read_tx_body(Reader&, const crypto::BilinearGroup&);

  void seal(const crypto::BilinearGroup& group);

  TxType type_ = TxType::Register;
  PublicKey sender_{};
  std::uint64_t round_ = 0;
  Amount fee_ = 0;
  TxPayload payload_;
  Signature signature_{};
  Bytes encoded_;
  Hash32 id_{};
};

// Builds and signs a transaction. Medical and Label records must verify under
// `record_key` (the issuing institution's hash key).
Transaction build_tx(TxType type, const TxFields& fields, std::uint64_t round, Amount fee,
                     const crypto::SigningKey& signer, const crypto::BilinearGroup& group,
                     const crypto::HashKey* record_key = nullptr);

Transaction decode_tx(ByteView data, const crypto::BilinearGroup& group);
Transaction read_tx_body(Reader& r, const crypto::BilinearGroup& group);

// H(ID || Age || ...) with '|' separators between fields.
Hash32 identity_digest(std::initializer_list<std::string_view> fields);

}  // namespace spchain::ledger
