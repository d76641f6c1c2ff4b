#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "spchain/error.hpp"
#include "spchain/ledger/codec.hpp"
#include "spchain/ledger/merkle.hpp"
#include "spchain/rng.hpp"

using namespace spchain;
using namespace spchain::ledger;
using fixtures::ToyWorld;

TEST_CASE("register transaction is content addressed") {
  ToyWorld w;
  auto alice = fixtures::key("alice");
  auto tx = w.register_tx(alice, "alice");
  CHECK(tx.signature_valid());
  CHECK(tx.id() == crypto::sha256(tx.encoded()));
  CHECK(decode_tx(tx.encoded(), w.group) == tx);
  CHECK(w.register_tx(alice, "alicia").id() != tx.id());
  for (std::size_t i = 0; i < tx.encoded().size(); ++i) {
    Bytes flipped = tx.encoded();
    flipped[i] ^= 0x01;
    try {
      auto decoded = decode_tx(flipped, w.group);
      CHECK(decoded.id() != tx.id());
    } catch (const DecodeError&) {
    }
  }
}

TEST_CASE("medical transaction over the worked-example digest") {
  ToyWorld w;
  auto bob = fixtures::key("bob");
  auto tx = w.medical_tx(bob, 3);
  REQUIRE(tx.record() != nullptr);
  CHECK(tx.record()->record.h.value == 85);
  CHECK(tx.signature_valid());
  CHECK(decode_tx(tx.encoded(), w.group) == tx);
}

TEST_CASE("build_tx rejects malformed payloads") {
  ToyWorld w;
  auto bob = fixtures::key("bob");
  TxFields f;
  f.institution = w.inst.key;
  f.record = w.digest(3);
  f.record->message = crypto::Scalar{4};
  CHECK_THROWS_WITH(build_tx(TxType::Medical, f, 1, 0, bob, w.group, &w.inst.hash_key),
                    "chameleon proof does not verify");
  f.record = w.digest(3);
  CHECK_THROWS_WITH(build_tx(TxType::Label, f, 1, 0, bob, w.group, &w.inst.hash_key),
                    "label transaction requires targetTxHash");
  CHECK_THROWS(build_tx(TxType::Medical, f, 1, 0, bob, w.group, nullptr));
  CHECK_THROWS(build_tx(TxType::Register, TxFields{}, 1, 0, bob, w.group));
  CHECK_THROWS(build_tx(TxType::Medical, f, 1, -1, bob, w.group, &w.inst.hash_key));
}

TEST_CASE("validate_tx reason codes") {
  ToyWorld w;
  auto alice = fixtures::key("alice");
  auto mallory = fixtures::key("mallory");
  w.enroll(alice, "alice");

  auto med = w.medical_tx(alice, 3);
  CHECK(validate_tx(med, w.state).ok());
  CHECK(validate_tx(w.medical_tx(mallory, 3), w.state).reason == Reason::Unregistered);
  CHECK(validate_tx(w.register_tx(alice, "alice-again"), w.state).reason == Reason::AlreadyRegistered);
  CHECK(validate_tx(w.register_tx(mallory, "alice"), w.state).reason == Reason::AlreadyRegistered);
  CHECK(validate_tx(w.register_tx(mallory, "mallory"), w.state).ok());
  CHECK(validate_tx(w.medical_tx(alice, 3, 9), w.state).reason == Reason::FutureRound);

  Hash32 nowhere{};
  nowhere.fill(0xab);
  CHECK(validate_tx(w.medical_tx(alice, 4, 1, nowhere), w.state).reason == Reason::DanglingLabel);

  w.state.append(alice.public_key(), w.pinned(med), w.group_);
  auto label = w.medical_tx(alice, 4, 2, med.id());
  CHECK(label.record()->record.h != med.record()->record.h);
  CHECK(validate_tx(label, w.state).ok());

  // Corrupt one proof byte; the signature is recomputed so only the proof is wrong.
  TxFields f;
  f.institution = w.inst.key;
  f.record = w.digest(4);
  f.target = med.id();
  auto good = build_tx(TxType::Label, f, 2, 0, alice, w.group, &w.inst.hash_key);
  Bytes bytes = good.encoded();
  auto proof_byte = std::search(bytes.begin(), bytes.end(), good.record()->record.proof.begin(),
                                good.record()->record.proof.end());
  REQUIRE(proof_byte != bytes.end());
  *(proof_byte + 1) ^= 0x01;
  auto forged = decode_tx(bytes, w.group);
  CHECK(validate_tx(forged, w.state).reason == Reason::BadSignature);

  auto unknown = ToyWorld();
  unknown.inst_keys = crypto::ch_keys_from_trapdoor(w.group, crypto::Scalar{9}, crypto::G1{5});
  TxFields g;
  g.institution = fixtures::key("nobody").public_key();
  g.record = crypto::ch_hash(unknown.inst_keys.hash_key, crypto::Scalar{3}, crypto::Scalar{10});
  auto stray = build_tx(TxType::Medical, g, 1, 0, alice, w.group, &unknown.inst_keys.hash_key);
  CHECK(validate_tx(stray, w.state).reason == Reason::UnknownInstitution);

  // A record hashed under another key does not verify under the named institution.
  g.institution = w.inst.key;
  auto mismatched = build_tx(TxType::Medical, g, 1, 0, alice, w.group, &unknown.inst_keys.hash_key);
  CHECK(validate_tx(mismatched, w.state).reason == Reason::BadChameleonProof);
}

TEST_CASE("stale rounds are rejected") {
  ToyWorld w;
  auto carol = fixtures::key("carol");
  w.enroll(carol, "carol", 3);
  CHECK(validate_tx(w.medical_tx(carol, 3, 2), w.state).reason == Reason::StaleRound);
  CHECK(validate_tx(w.medical_tx(carol, 3, 3), w.state).ok());
}

TEST_CASE("institution root: single leaf") {
  ToyWorld w;
  std::vector<Bytes> leaves{to_bytes("inst-A")};
  auto root = institution_root(leaves, w.inst.hash_key, crypto::Scalar{10});
  auto expected = crypto::ch_hash(w.inst.hash_key, w.group.reduce(crypto::sha256(leaves[0])), crypto::Scalar{10});
  CHECK(root == expected);
  CHECK(verify_institution_root(leaves, w.inst.hash_key, root));
  CHECK_THROWS(institution_root(std::vector<Bytes>{}, w.inst.hash_key, crypto::Scalar{10}));
}

TEST_CASE("institution root: three leaves duplicate the last digest") {
  std::vector<Bytes> leaves{to_bytes("l1"), to_bytes("l2"), to_bytes("l3")};
  auto h1 = crypto::sha256(leaves[0]);
  auto h2 = crypto::sha256(leaves[1]);
  auto h3 = crypto::sha256(leaves[2]);
  auto left = crypto::sha256({h1, h2});
  auto right = crypto::sha256({h3, h3});
  CHECK(merkle_top(leaves) == crypto::sha256({left, right}));

  std::vector<Bytes> four{leaves[0], leaves[1], leaves[2], leaves[2]};
  CHECK(merkle_top(four) == merkle_top(leaves));
  std::vector<Bytes> two{to_bytes("a"), to_bytes("b")};
  std::vector<Bytes> swapped{to_bytes("b"), to_bytes("a")};
  CHECK(merkle_top(two) != merkle_top(swapped));
  std::vector<Bytes> five{to_bytes("1"), to_bytes("2"), to_bytes("3"), to_bytes("4"), to_bytes("5")};
  auto l1 = crypto::sha256({crypto::sha256({crypto::sha256(five[0]), crypto::sha256(five[1])}),
                            crypto::sha256({crypto::sha256(five[2]), crypto::sha256(five[3])})});
  auto l5 = crypto::sha256(five[4]);
  auto r1 = crypto::sha256({crypto::sha256({l5, l5}), crypto::sha256({l5, l5})});
  CHECK(merkle_top(five) == crypto::sha256({l1, r1}));
}

TEST_CASE("institution root redaction keeps h") {
  auto group = crypto::BilinearGroup::mersenne61();
  Rng rng(3);
  auto keys = crypto::ch_keygen(61, group, rng);
  std::vector<Bytes> leaves{to_bytes("A")};
  auto root = institution_root(leaves, keys.hash_key, rng);
  std::vector<Bytes> grown{to_bytes("A"), to_bytes("B")};
  auto redacted = redact_institution_root(keys.trapdoor, keys.hash_key, root, grown);
  CHECK(redacted.h == root.h);
  CHECK(verify_institution_root(grown, keys.hash_key, redacted));
  CHECK_FALSE(verify_institution_root(leaves, keys.hash_key, redacted));
}

TEST_CASE("append_pinned_tx") {
  ToyWorld w;
  auto alice = fixtures::key("alice");
  w.enroll(alice, "alice");
  const auto& empty = *w.state.microblock(alice.public_key());
  auto med = w.medical_tx(alice, 3);
  auto one = append_pinned_tx(empty, w.pinned(med), w.group_);
  CHECK(one.entries.size() == 1);

  auto label = w.medical_tx(alice, 4, 2, med.id());
  auto two = append_pinned_tx(one, w.pinned(label), w.group_);
  REQUIRE(two.entries.size() == 2);
  CHECK(two.entries[0] == one.entries[0]);
  REQUIRE(current_record(two, med.id()) != nullptr);
  CHECK(*current_record(two, med.id()) == *label.record());

  // Signers {0.3, 0.2}: two of four and weight 0.5.
  PinnedTransaction forged{label, fixtures::certify(label.id(), w.committee, {1, 2})};
  CHECK_THROWS_WITH(append_pinned_tx(one, forged, w.group_), "unpinned transaction: no-quorum");
  PinnedTransaction wrong_subject{label, fixtures::certify(med.id(), w.committee, {0, 1, 2})};
  CHECK_THROWS(append_pinned_tx(one, wrong_subject, w.group_));
  auto lying = w.pinned(label);
  lying.cert.signatures[2].weight = 0.9;
  CHECK_THROWS_WITH(append_pinned_tx(one, lying, w.group_), "unpinned transaction: weight-mismatch");
}

TEST_CASE("label chains surface the newest correction") {
  ToyWorld w;
  auto alice = fixtures::key("alice");
  w.enroll(alice, "alice");
  auto med = w.medical_tx(alice, 3);
  w.state.append(alice.public_key(), w.pinned(med), w.group_);
  auto l1 = w.medical_tx(alice, 4, 2, med.id());
  w.state.append(alice.public_key(), w.pinned(l1), w.group_);
  auto l2 = w.medical_tx(alice, 5, 3, l1.id());
  w.state.append(alice.public_key(), w.pinned(l2), w.group_);
  const auto& block = *w.state.microblock(alice.public_key());
  CHECK(newest_label(block, med.id())->tx.id() == l2.id());
  CHECK(current_record(block, med.id())->record.message.value == 5);
  CHECK(w.state.find_entry(alice.public_key(), med.id()) != nullptr);
  CHECK(block.entries.size() == 3);
}

TEST_CASE("chain state rejects duplicate patient blocks") {
  ToyWorld w;
  auto alice = fixtures::key("alice");
  w.enroll(alice, "alice");
  CHECK_THROWS(w.enroll(alice, "alice"));
  CHECK(w.state.microblock_count() == 1);
}

namespace {

KeyBlock random_keyblock(ToyWorld& w, Rng& rng) {
  KeyBlock b;
  rng.fill(b.prev_keyblock_hash);
  rng.fill(b.penu_microblock_hash);
  b.nonce = rng.next();
  b.miner = fixtures::key("miner-" + std::to_string(rng.uniform_below(4))).public_key();
  rng.fill(b.target);
  b.height = rng.uniform_below(1000);
  auto n = rng.uniform_below(3);
  for (std::uint64_t i = 0; i < n; ++i) {
    b.register_txs.push_back(w.register_tx(fixtures::key("p" + std::to_string(rng.next() % 50)),
                                           "id" + std::to_string(rng.next() % 1000), rng.uniform_below(9)));
  }
  if (rng.bernoulli(0.5)) b.pin = fixtures::certify(b.hash(), w.committee, {0, 1, 2}, rng.uniform_below(5));
  return b;
}

MicroBlock random_microblock(ToyWorld& w, Rng& rng) {
  MicroBlock b;
  auto patient = fixtures::key("p" + std::to_string(rng.next() % 50));
  b.owner = patient.public_key();
  b.registration_round = rng.uniform_below(100);
  auto leaves = 1 + rng.uniform_below(3);
  for (std::uint64_t i = 0; i < leaves; ++i) {
    Bytes leaf(rng.uniform_below(40));
    rng.fill(leaf);
    b.institution_leaves.push_back(leaf);
  }
  b.institution_root = w.digest(rng.uniform_below(101), 1 + rng.uniform_below(100));
  b.creator = "inst-" + std::to_string(rng.uniform_below(9));
  b.round_number = rng.uniform_below(100);
  rng.fill(b.prev_hash);
  auto n = rng.uniform_below(3);
  std::optional<Hash32> last;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto tx = w.medical_tx(patient, rng.uniform_below(101), rng.uniform_below(9), last);
    last = tx.id();
    b.entries.push_back(w.pinned(tx));
  }
  return b;
}

}  // namespace

TEST_CASE("block codec round trip on randomized blocks") {
  ToyWorld w;
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    Block block = rng.bernoulli(0.5) ? Block(random_keyblock(w, rng)) : Block(random_microblock(w, rng));
    auto bytes = encode_block(block, w.group);
    auto decoded = decode_block(bytes, w.group);
    REQUIRE(decoded == block);
    REQUIRE(encode_block(decoded, w.group) == bytes);
  }
}

TEST_CASE("structurally equal blocks encode identically") {
  ToyWorld w;
  Rng a(5), b(5);
  auto x = random_microblock(w, a);
  auto y = random_microblock(w, b);
  CHECK(encode_microblock(x, w.group) == encode_microblock(y, w.group));
}

TEST_CASE("single-byte flips never decode to the same block") {
  ToyWorld w;
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Block block = trial % 2 ? Block(random_keyblock(w, rng)) : Block(random_microblock(w, rng));
    auto bytes = encode_block(block, w.group);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      Bytes flipped = bytes;
      flipped[i] ^= static_cast<std::uint8_t>(1u << (i % 8));
      try {
        auto decoded = decode_block(flipped, w.group);
        REQUIRE(encode_block(decoded, w.group) == flipped);
        REQUIRE_FALSE(decoded == block);
      } catch (const DecodeError& e) {
        REQUIRE(e.offset() <= flipped.size());
      }
    }
  }
}

TEST_CASE("decode errors carry offsets") {
  ToyWorld w;
  Rng rng(1);
  auto kb = random_keyblock(w, rng);
  auto bytes = encode_keyblock(kb);
  bytes.push_back(0);
  try {
    decode_block(bytes, w.group);
    FAIL("expected trailing-bytes error");
  } catch (const DecodeError& e) {
    CHECK(e.offset() == bytes.size() - 1);
  }
  bytes.pop_back();
  bytes.resize(bytes.size() - 3);
  CHECK_THROWS_AS(decode_block(bytes, w.group), DecodeError);
  Bytes unknown{0x07};
  CHECK_THROWS_AS(decode_block(unknown, w.group), DecodeError);

  auto med = w.medical_tx(fixtures::key("x"), 3);
  Bytes tx_bytes = med.encoded();
  tx_bytes[0] = 9;
  try {
    decode_tx(tx_bytes, w.group);
    FAIL("expected unknown type");
  } catch (const DecodeError& e) {
    CHECK(e.offset() == 0);
  }
}
