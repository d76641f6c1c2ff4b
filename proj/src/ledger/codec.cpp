#include "spchain/ledger/codec.hpp"

namespace spchain::ledger {

namespace {

Transaction read_nested_tx(Reader& r, const crypto::BilinearGroup& group) {
  std::size_t at = r.offset();
  auto body = r.blob();
  Reader inner(body, at + 4);
  auto tx = read_tx_body(inner, group);
  inner.expect_end();
  return tx;
}

KeyBlock read_keyblock(Reader& r, const crypto::BilinearGroup& group) {
  KeyBlock b;
  b.prev_keyblock_hash = r.fixed<32>();
  b.penu_microblock_hash = r.fixed<32>();
  b.nonce = r.u64();
  b.miner = r.fixed<32>();
  b.target = r.fixed<32>();
  b.height = r.u64();
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::size_t at = r.offset();
    auto tx = read_nested_tx(r, group);
    if (tx.type() != TxType::Register) r.fail_at(at, "keyblocks carry only register transactions");
    b.register_txs.push_back(std::move(tx));
  }
  if (r.flag()) b.pin = read_certificate(r);
  return b;
}

MicroBlock read_microblock(Reader& r, const crypto::BilinearGroup& group) {
  MicroBlock b;
  b.owner = r.fixed<32>();
  b.registration_round = r.u64();
  auto leaves = r.u32();
  for (std::uint32_t i = 0; i < leaves; ++i) {
    auto leaf = r.blob();
    b.institution_leaves.emplace_back(leaf.begin(), leaf.end());
  }
  b.institution_root = crypto::read_digest(r, group);
  b.creator = r.str();
  b.round_number = r.u64();
  b.prev_hash = r.fixed<32>();
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::size_t at = r.offset();
    auto tx = read_nested_tx(r, group);
    if (tx.type() == TxType::Register) r.fail_at(at, "patient blocks carry only medical and label transactions");
    b.entries.push_back(PinnedTransaction{std::move(tx), read_certificate(r)});
  }
  return b;
}

}  // namespace

Bytes encode_keyblock(const KeyBlock& block, bool include_pin) {
  Writer w;
  w.u8(kKeyBlockTag);
  w.raw(block.prev_keyblock_hash);
  w.raw(block.penu_microblock_hash);
  w.u64(block.nonce);
  w.raw(block.miner);
  w.raw(block.target);
  w.u64(block.height);
  w.u32(static_cast<std::uint32_t>(block.register_txs.size()));
  for (const auto& tx : block.register_txs) w.blob(tx.encoded());
  if (include_pin) {
    w.u8(block.pin ? 1 : 0);
    if (block.pin) write_certificate(w, *block.pin);
  }
  return std::move(w).bytes();
}

Bytes encode_microblock(const MicroBlock& block, const crypto::BilinearGroup& group) {
  Writer w;
  w.u8(kMicroBlockTag);
  w.raw(block.owner);
  w.u64(block.registration_round);
  w.u32(static_cast<std::uint32_t>(block.institution_leaves.size()));
  for (const auto& leaf : block.institution_leaves) w.blob(leaf);
  crypto::write_digest(w, block.institution_root, group);
  w.str(block.creator);
  w.u64(block.round_number);
  w.raw(block.prev_hash);
  w.u32(static_cast<std::uint32_t>(block.entries.size()));
  for (const auto& e : block.entries) {
    w.blob(e.tx.encoded());
    write_certificate(w, e.cert);
  }
  return std::move(w).bytes();
}

Bytes encode_block(const Block& block, const crypto::BilinearGroup& group) {
  if (const auto* kb = std::get_if<KeyBlock>(&block)) return encode_keyblock(*kb);
  return encode_microblock(std::get<MicroBlock>(block), group);
}

Block decode_block(ByteView data, const crypto::BilinearGroup& group) {
  Reader r(data);
  auto tag = r.u8();
  Block out;
  if (tag == kKeyBlockTag) {
    out = read_keyblock(r, group);
  } else if (tag == kMicroBlockTag) {
    out = read_microblock(r, group);
  } else {
    r.fail_at(0, "unknown block kind " + std::to_string(tag));
  }
  r.expect_end();
  return out;
}

KeyBlock decode_keyblock(ByteView data, const crypto::BilinearGroup& group) {
  auto block = decode_block(data, group);
  if (!std::holds_alternative<KeyBlock>(block)) throw DecodeError(0, "expected a keyblock");
  return std::get<KeyBlock>(std::move(block));
}

MicroBlock decode_microblock(ByteView data, const crypto::BilinearGroup& group) {
  auto block = decode_block(data, group);
  if (!std::holds_alternative<MicroBlock>(block)) throw DecodeError(0, "expected a microblock");
  return std::get<MicroBlock>(std::move(block));
}

}  // namespace spchain::ledger
