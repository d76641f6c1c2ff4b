#include "spchain/sim/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <optional>

#include "spchain/consensus/group.hpp"
#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"
#include "spchain/ledger/chain_state.hpp"
#include "spchain/ledger/pin.hpp"
#include "spchain/node/workflow.hpp"
#include "spchain/sim/event_loop.hpp"
#include "spchain/sim/network.hpp"
#include "spchain/sim/report.hpp"
#include "spchain/sim/simulation.hpp"

namespace spchain::sim {

namespace {

struct Sizes {
  std::size_t register_tx = 0;
  std::size_t medical_tx = 0;
};

Bytes seed_of(const std::string& label) { return Bytes(label.begin(), label.end()); }

// Real transactions, encoded, so the sizes follow the codec.
Sizes measure_txs(std::size_t record_size) {
  auto group = crypto::BilinearGroup::mersenne61();
  ledger::ChainState state(group);
  auto inst = node::InstitutionActor::setup("m00", seed_of("bench-institution"), group, 61);
  auto patient = node::PatientActor::setup("p0", seed_of("bench-patient"));
  state.add_institution(inst.info());
  state.set_round(1);
  auto reg = patient.make_register(0, ledger::kCoin, group);
  node::open_patient_block(state, reg, inst, "m00", 1);
  Rng rng(7);
  auto rec = node::synthetic_record(rng, record_size, "m00", "p0", 1);
  auto tx = node::upload(patient, inst, rec, state, 1, ledger::kCoin);
  return {reg.encoded().size(), tx.encoded().size()};
}

std::size_t certificate_bytes(std::size_t x) {
  std::vector<consensus::Candidate> cands;
  std::vector<crypto::SigningKey> keys;
  for (std::size_t i = 0; i < x; ++i) {
    keys.push_back(crypto::SigningKey::from_seed(crypto::sha256(seed_of("bench-member-" + std::to_string(i)))));
    cands.push_back({miner_id(i), keys.back().public_key(), 1.0});
  }
  auto group = consensus::select_group(cands, x, 0);
  Hash32 subject = crypto::sha256(seed_of("bench-subject"));
  std::vector<consensus::Vote> votes;
  for (std::size_t i = 0; i < x; ++i) {
    votes.push_back(consensus::cast_vote(miner_id(i), keys[i], subject));
    auto outcome = consensus::pin(subject, votes, group);
    if (outcome.pinned()) {
      Writer w;
      ledger::write_certificate(w, *outcome.certificate);
      return std::move(w).bytes().size();
    }
  }
  throw Error("bench: full vote set did not certify");
}

std::size_t quorum_count(std::size_t x) {
  for (std::size_t k = 1; k <= x; ++k)
    if (ledger::quorum_met(k, x, static_cast<double>(k), static_cast<double>(x))) return k;
  return x;
}

// Leader fans the batch out to every other member over its own uplink; each
// member checks all entries, signs them and returns its votes; the leader
// verifies arriving votes one member at a time and pins at quorum.
double batch_seconds(const BenchParams& p, std::size_t x, std::size_t txs, std::size_t batch_bytes) {
  EventLoop loop;
  Network net(loop, Rng(1), p.link_delay_us, p.link_delay_us, p.uplink_bytes_per_s);
  const std::size_t need = quorum_count(x);
  const std::size_t vote_bytes = txs * 96;
  std::size_t have = 0;
  Time leader_free = txs * p.sign_us;  // leader signs its own votes first
  std::optional<Time> pinned_at;
  auto count_vote = [&](Time ready) {
    leader_free = std::max(leader_free, ready) + txs * p.verify_us;
    if (++have >= need && !pinned_at) pinned_at = leader_free;
  };
  count_vote(0);
  for (std::size_t m = 1; m < x; ++m) {
    auto member = miner_id(m);
    net.send("leader", member, batch_bytes, [&, member] {
      loop.after(txs * (p.verify_us + p.sign_us), Phase::Timer,
                 [&, member] { net.send(member, "leader", vote_bytes, [&] { count_vote(loop.now()); }); });
    });
  }
  loop.run();
  if (!pinned_at) throw Error("bench: batch never reached quorum");
  return static_cast<double>(*pinned_at) / 1e6;
}

}  // namespace

std::vector<BenchRow> bench_throughput(const BenchParams& p) {
  if (p.block_sizes_mb.empty() || p.group_sizes.empty()) throw ConfigError("bench matrix is empty");
  for (double mb : p.block_sizes_mb)
    if (!(mb > 0)) throw ConfigError("block sizes must be positive");
  for (auto x : p.group_sizes)
    if (x == 0) throw ConfigError("group sizes must be positive");
  auto sizes = measure_txs(p.record_size);
  std::vector<BenchRow> rows;
  for (double mb : p.block_sizes_mb) {
    auto block_bytes = static_cast<std::size_t>(mb * 1'000'000.0);
    for (auto x : p.group_sizes) {
      BenchRow row;
      row.block_size_mb = mb;
      row.group_size = x;
      row.register_tx_bytes = sizes.register_tx;
      row.entry_bytes = sizes.medical_tx + certificate_bytes(x);
      row.keyblock_txs = block_bytes / (sizes.register_tx + 4);
      row.keyblock_tps = static_cast<double>(row.keyblock_txs) / p.keyblock_interval_s;
      row.batch_txs = std::max<std::size_t>(1, block_bytes / row.entry_bytes);
      row.batch_seconds = batch_seconds(p, x, row.batch_txs, row.batch_txs * sizes.medical_tx);
      row.microblock_tps = static_cast<double>(row.batch_txs) / row.batch_seconds;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = fmt::format("{}\n", kCsvHeader);
  out +=
      "block_size_mb,group_size,register_tx_bytes,entry_bytes,keyblock_txs,keyblock_tps,batch_txs,batch_seconds,"
      "microblock_tps\n";
  for (const auto& r : rows)
    out += fmt::format("{:g},{},{},{},{},{:.6f},{},{:.6f},{:.6f}\n", r.block_size_mb, r.group_size, r.register_tx_bytes,
                       r.entry_bytes, r.keyblock_txs, r.keyblock_tps, r.batch_txs, r.batch_seconds, r.microblock_tps);
  return out;
}

}  // namespace spchain::sim
