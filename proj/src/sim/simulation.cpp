#include "spchain/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "spchain/consensus/group.hpp"
#include "spchain/consensus/reputation.hpp"
#include "spchain/consensus/rewards.hpp"
#include "spchain/consensus/scheduler.hpp"
#include "spchain/crypto/hash.hpp"
#include "spchain/error.hpp"
#include "spchain/ledger/codec.hpp"
#include "spchain/mining/mining.hpp"
#include "spchain/node/workflow.hpp"
#include "spchain/sim/event_loop.hpp"
#include "spchain/sim/network.hpp"

namespace spchain::sim {

std::string miner_id(std::size_t index) {
  std::string n = std::to_string(index);
  return "m" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

const MinerSummary& ScenarioResult::miner(const std::string& id) const {
  for (const auto& m : miners)
    if (m.id == id) return m;
  throw Error("unknown miner " + id);
}

namespace {

using ledger::KeyBlock;
using ledger::Transaction;
using node::InstitutionActor;
using node::PatientActor;

constexpr std::size_t kVoteBytes = 96;
constexpr std::size_t kKeyblockOverhead = 256;

Bytes seed_bytes(std::uint64_t seed, const std::string& label) {
  Writer w;
  w.u64(seed);
  w.str(label);
  return std::move(w).bytes();
}

struct Miner {
  std::string id;
  std::unique_ptr<InstitutionActor> actor;
  double base_share = 0;
  mining::AttemptBudget budget;
  std::optional<KeyBlock> templ;
  std::uint64_t next_nonce = 0;
  bool joined = true;
  bool honest = true;
  bool honest_seen_by_r1 = true;  // r1 picks up the honesty flag one round later
  std::vector<std::uint64_t> created, tr, tml;  // per chunk
  std::deque<std::pair<KeyBlock, std::uint64_t>> withheld;  // block, release round
  double r1 = 0, r2 = 0, R = 0;
  MinerSummary summary;
};

struct RecordRef {
  Hash32 tx_id{};
  std::size_t institution = 0;
  std::string tag;
};

struct Patient {
  std::unique_ptr<PatientActor> actor;
  std::size_t home = 0;
  bool zombie = false;
  bool registered = false;
  std::size_t registrar = 0;
  std::vector<RecordRef> records;
  std::vector<Hash32> pinned_ids;
  std::set<std::size_t> institutions;  // leaves in the patient block
};

struct Pending {
  Transaction tx;
  std::size_t patient = 0;
  std::size_t receiptor = 0;
  std::uint64_t submit_round = 0;
  std::string tag;
};

struct RoundTally {
  double start_s = 0;
  std::uint64_t records = 0;
  std::uint64_t pin_failures = 0;
  std::uint64_t max_latency = 0;
  bool stalled = false;
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        rng_(cfg.seed),
        arrivals_(rng_.fork(1)),
        votes_rng_(rng_.fork(2)),
        loop_(cfg.shuffle_ties ? std::optional<std::uint64_t>(cfg.tie_seed) : std::nullopt),
        net_(loop_, rng_.fork(3), cfg.delay_min_us, cfg.delay_max_us, cfg.uplink_bytes_per_s),
        group_param_(crypto::BilinearGroup::mersenne61()),
        state_(group_param_),
        r1_model_(consensus::make_r1_provider(cfg.r1_model, cfg.r1_cap)),
        target_(mining::target_from_bits(cfg.target_bits)) {
    scheduler_.batch_cap = cfg.batch_cap;
    result_.config = cfg;
  }

  ScenarioResult run() {
    setup();
    start_round();
    schedule_registrations();
    schedule_next_arrival();
    loop_.schedule(0, Phase::Tick, [this] { tick(); });
    loop_.schedule(cfg_.delta_steps * cfg_.step_us, Phase::Timer, [this] { batch_timer(); });
    // a hundred times the expected round time is plenty; past that, keyblocks are not pinning
    double expected_round_s = std::ldexp(1.0, static_cast<int>(cfg_.target_bits)) /
                              (cfg_.attempts_per_step * 1e6 / static_cast<double>(cfg_.step_us));
    auto cap = static_cast<Time>((100.0 * expected_round_s * static_cast<double>(cfg_.rounds) + 60.0) * 1e6);
    loop_.run(cap);
    if (view_.pinned_height() < cfg_.rounds)
      throw InvariantViolation("liveness: only " + std::to_string(view_.pinned_height()) + " of " +
                               std::to_string(cfg_.rounds) + " rounds pinned");
    finish();
    return std::move(result_);
  }

 private:
  // ---- setup ----

  void setup() {
    auto shares = cfg_.shares();
    for (std::size_t i = 0; i < cfg_.miners; ++i) {
      Miner m;
      m.id = miner_id(i);
      m.actor = std::make_unique<InstitutionActor>(
          InstitutionActor::setup(m.id, seed_bytes(cfg_.seed, "institution-" + m.id), group_param_, 61));
      m.base_share = shares[i];
      m.summary.id = m.id;
      m.summary.power = shares[i];
      if (is_flash(i)) {
        m.summary.power = cfg_.flash_power;
        m.joined = cfg_.flash_join_round == 0;
      }
      state_.add_institution(m.actor->info());
      by_key_[m.actor->public_key()] = i;
      miners_.push_back(std::move(m));
    }
    std::size_t total = cfg_.patients + (cfg_.adversary == Adversary::Fraud ? cfg_.zombies : 0);
    // patients never register at a flash miner: it rents hashpower, it serves nobody
    std::vector<std::size_t> homes;
    for (std::size_t i = 0; i < cfg_.miners; ++i)
      if (!is_flash(i)) homes.push_back(i);
    for (std::size_t k = 0; k < total; ++k) {
      Patient p;
      p.zombie = k >= cfg_.patients;
      std::string name = (p.zombie ? "z" : "p") + std::to_string(k);
      p.actor = std::make_unique<PatientActor>(PatientActor::setup(name, seed_bytes(cfg_.seed, "patient-" + name)));
      p.home = p.zombie ? cfg_.adversary_miner : homes[k % homes.size()];
      patients_.push_back(std::move(p));
    }
  }

  bool is_flash(std::size_t i) const { return cfg_.adversary == Adversary::Flash && i == cfg_.adversary_miner; }
  bool is_selfish(std::size_t i) const { return cfg_.adversary == Adversary::Selfish && i == cfg_.adversary_miner; }
  bool is_inhibitor(std::size_t i) const {
    return cfg_.adversary == Adversary::Inhibition && i == cfg_.adversary_miner;
  }

  std::uint64_t round() const { return view_.pinned_height(); }
  std::uint64_t chunk_index() const { return round() / cfg_.chunk; }

  static void bump(std::vector<std::uint64_t>& v, std::size_t i) {
    if (v.size() <= i) v.resize(i + 1, 0);
    ++v[i];
  }

  void log(const std::string& actor, const std::string& action, const std::string& detail) {
    events_.note(round(), actor, action, detail);
  }

  // ---- rounds ----

  void start_round() {
    auto r = round();
    state_.set_round(r);
    if (cfg_.adversary == Adversary::Flash && r == cfg_.flash_join_round && !miners_[cfg_.adversary_miner].joined) {
      miners_[cfg_.adversary_miner].joined = true;
      log(miners_[cfg_.adversary_miner].id, "join", "flash");
    }
    select_group();
    set_budgets();
    tally_ = RoundTally{};
    tally_.start_s = static_cast<double>(loop_.now()) / 1e6;
    window_open_ = false;

    auto regs = register_batch();
    for (std::size_t i = 0; i < miners_.size(); ++i) {
      auto& m = miners_[i];
      if (!m.joined) continue;
      if (is_selfish(i) && cfg_.withhold_rounds > 0) {
        release_withheld(i);
        if (!m.templ) {
          m.templ = template_on_tip(m, regs);
          m.next_nonce = 0;
        }
        continue;  // keeps extending its private branch
      }
      m.templ = template_on_tip(m, regs);
      m.next_nonce = 0;
    }
    if (cfg_.adversary == Adversary::Flash && cfg_.flash_misbehave_round >= 0 &&
        r == static_cast<std::uint64_t>(cfg_.flash_misbehave_round))
      flash_misbehave();
  }

  KeyBlock template_on_tip(const Miner& m, const std::vector<Transaction>& regs) {
    KeyBlock b;
    b.height = view_.pinned_height();
    b.prev_keyblock_hash = view_.tip_hash();
    b.penu_microblock_hash = view_.penu_for(b.height);
    b.miner = m.actor->public_key();
    b.target = target_;
    b.register_txs = regs;
    return b;
  }

  std::vector<Transaction> register_batch() {
    std::vector<Transaction> out;
    std::set<Hash32> identities;
    std::size_t bytes = kKeyblockOverhead;
    for (const auto& [tx, receiptor] : mempool_) {
      (void)receiptor;
      if (!ledger::validate_tx(tx, state_).ok()) continue;
      if (!identities.insert(tx.registration()->identity_digest).second) continue;
      if (bytes + tx.encoded().size() + 4 > cfg_.block_size) break;
      bytes += tx.encoded().size() + 4;
      out.push_back(tx);
    }
    return out;
  }

  void set_budgets() {
    double honest_total = 0;
    bool flash_on = false;
    for (std::size_t i = 0; i < miners_.size(); ++i) {
      if (is_flash(i)) {
        flash_on = miners_[i].joined;
        continue;
      }
      honest_total += miners_[i].base_share;
    }
    for (std::size_t i = 0; i < miners_.size(); ++i) {
      auto& m = miners_[i];
      double share = 0;
      if (is_flash(i))
        share = m.joined ? cfg_.flash_power : 0;
      else if (honest_total > 0)
        share = m.base_share / honest_total * (flash_on ? 1 - cfg_.flash_power : 1);
      if (share != m.budget.rate() / cfg_.attempts_per_step) m.budget.set_rate(share * cfg_.attempts_per_step);
    }
  }

  void select_group() {
    std::vector<consensus::Candidate> cands;
    for (const auto& m : miners_)
      if (m.joined) cands.push_back({m.id, m.actor->signer().public_key(), m.R});
    // vote keys are the institutions' signing keys
    group_ = consensus::select_group(cands, cfg_.group_size, round());
    leader_ = 0;
    double best = -1;
    for (const auto& mem : group_.members) {
      double r = miners_[index_of(mem.id)].R;
      if (r > best) {
        best = r;
        leader_ = index_of(mem.id);
      }
    }
    for (const auto& mem : group_.members) {
      auto& s = miners_[index_of(mem.id)].summary;
      if (!s.ever_in_group) s.first_group_round = static_cast<std::int64_t>(round());
      s.ever_in_group = true;
      ++s.rounds_in_group;
    }
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < miners_.size(); ++i)
      if (miners_[i].id == id) return i;
    throw Error("unknown miner " + id);
  }

  // ---- mining ----

  void tick() {
    for (std::size_t i = 0; i < miners_.size(); ++i) {
      auto& m = miners_[i];
      auto attempts = m.budget.take();
      if (!m.joined || !m.templ || attempts == 0) continue;
      auto res = mining::mine_template(*m.templ, attempts, m.next_nonce);
      m.next_nonce = res.next_nonce;
      if (!res.block) continue;
      found(i, std::move(*res.block));
    }
    if (!loop_.stopped()) loop_.after(cfg_.step_us, Phase::Tick, [this] { tick(); });
  }

  void found(std::size_t i, KeyBlock block) {
    auto& m = miners_[i];
    if (is_selfish(i) && cfg_.withhold_rounds > 0) {
      // keep it private and build on it
      m.withheld.emplace_back(block, round() + cfg_.withhold_rounds);
      log(m.id, "withhold", short_hex(block.hash()));
      KeyBlock next = block;
      next.height = block.height + 1;
      next.prev_keyblock_hash = block.hash();
      next.register_txs.clear();
      next.nonce = 0;
      m.templ = next;
      m.next_nonce = 0;
      return;
    }
    m.templ.reset();
    publish(i, std::move(block));
  }

  void publish(std::size_t i, KeyBlock block) {
    auto size = ledger::encode_keyblock(block, false).size();
    auto leader = miners_[leader_].id;
    net_.send(miners_[i].id, leader, size, [this, i, b = std::move(block)] { candidate_arrived(i, b); });
  }

  void release_withheld(std::size_t i) {
    auto& m = miners_[i];
    while (!m.withheld.empty() && m.withheld.front().second <= round()) {
      auto b = std::move(m.withheld.front().first);
      m.withheld.pop_front();
      log(m.id, "release", short_hex(b.hash()));
      publish(i, std::move(b));
    }
  }

  void flash_misbehave() {
    auto& m = miners_[cfg_.adversary_miner];
    if (!m.joined || view_.pinned_height() < 2) return;
    // a rival for the genesis keyblock, long after it was pinned
    KeyBlock rival;
    rival.height = 0;
    rival.prev_keyblock_hash = mining::genesis_keyblock_hash();
    rival.penu_microblock_hash = mining::genesis_microblock_hash();
    rival.miner = m.actor->public_key();
    rival.target = target_;
    rival.nonce = 1ull << 40;
    auto res = mining::mine_template(rival, 1ull << 24, rival.nonce);
    if (!res.block) return;
    log(m.id, "misbehave", short_hex(res.block->hash()));
    publish(cfg_.adversary_miner, std::move(*res.block));
  }

  void candidate_arrived(std::size_t from, const KeyBlock& block) {
    auto verdict = mining::fork_choice(view_, block);
    if (verdict == mining::Verdict::Reject) {
      ++result_.rejected_keyblocks;
      // more than a round stale: the sender knew this height was final
      if (block.height + 1 < view_.pinned_height() && miners_[from].honest) {
        miners_[from].honest = false;
        log(miners_[from].id, "honesty-lost", short_hex(block.hash()));
      }
      return;
    }
    if (block.height < view_.pinned_height()) return;  // duplicate of a final block
    view_.hold(block);
    if (verdict == mining::Verdict::Orphan || window_open_) return;
    window_open_ = true;
    auto h = view_.pinned_height();
    loop_.after(2 * net_.max_delay(), Phase::Timer, [this, h] { close_window(h); });
  }

  void close_window(std::uint64_t height) {
    if (view_.pinned_height() != height) return;
    auto pick = view_.preferred_candidate();
    if (!pick) {
      window_open_ = false;
      return;
    }
    const auto* block = view_.find_held(*pick);
    auto size = ledger::encode_keyblock(*block, false).size();
    auto ballot = std::make_shared<std::vector<consensus::Vote>>();
    Time last = loop_.now();
    for (const auto& mem : group_.members) {
      auto member = index_of(mem.id);
      auto subject = *pick;
      auto arrive = net_.send(miners_[leader_].id, mem.id, size, [this, member, subject, ballot] {
        const auto* b = view_.find_held(subject);
        if (b == nullptr || mining::fork_choice(view_, *b) != mining::Verdict::Accept) return;
        auto vote = consensus::cast_vote(miners_[member].id, miners_[member].actor->signer(), subject);
        net_.send(miners_[member].id, miners_[leader_].id, kVoteBytes, [ballot, vote] { ballot->push_back(vote); });
      });
      last = std::max(last, arrive);
    }
    // votes leave their member on arrival; allow one more link delay plus slack
    Time deadline = last + net_.max_delay() + 1000;
    loop_.schedule(deadline, Phase::Timer, [this, height, subject = *pick, ballot] { tally_keyblock(height, subject, *ballot); });
  }

  void tally_keyblock(std::uint64_t height, const Hash32& subject, const std::vector<consensus::Vote>& votes) {
    if (view_.pinned_height() != height) return;
    auto outcome = consensus::pin(subject, votes, group_);
    if (!outcome.pinned()) {
      ++tally_.pin_failures;
      ++result_.pin_failures;
      loop_.after(2 * net_.max_delay(), Phase::Timer, [this, height] { close_window(height); });
      return;
    }
    finalize(subject, *outcome.certificate);
  }

  void finalize(const Hash32& subject, const ledger::PinCertificate& cert) {
    auto height = view_.pinned_height();
    if (auto it = certified_.find(height); it != certified_.end() && it->second != subject) ++result_.conflicts;
    certified_[height] = subject;
    auto creator_idx = by_key_.at(view_.find_held(subject)->miner);
    if (!view_.pin(subject, cert)) throw InvariantViolation("certified keyblock could not be pinned");
    result_.pinned.push_back(subject);
    for (std::size_t i = 0; i < result_.pinned.size(); ++i)
      if (view_.pinned()[i].hash() != result_.pinned[i]) throw InvariantViolation("pinned prefix changed");
    const auto& block = view_.pinned().back();
    auto& creator = miners_[creator_idx];
    log(creator.id, "keyblock-pinned", short_hex(subject));

    consensus::FeeSchedule fees{cfg_.mining_reward, cfg_.creator_share};
    auto rewards = consensus::keyblock_rewards(block, creator.id, group_, fees);
    Amount expected = cfg_.mining_reward;
    for (const auto& tx : block.register_txs) expected += tx.fee();
    if (consensus::total(rewards) != expected) throw InvariantViolation("keyblock reward not conserved");
    creator.summary.keyblock_reward += rewards.at(creator.id);
    round_rewards_[creator.id] += rewards.at(creator.id);
    ++creator.summary.keyblocks;
    bump(creator.created, height / cfg_.chunk);

    // the next round begins; pinned registrations open patient blocks in it
    auto next = height + 1;
    state_.set_round(next);
    for (const auto& tx : block.register_txs) {
      auto it = std::find_if(mempool_.begin(), mempool_.end(), [&](const auto& e) { return e.first.id() == tx.id(); });
      if (it == mempool_.end()) continue;
      auto receiptor = it->second;
      mempool_.erase(it);
      if (!ledger::validate_tx(tx, state_).ok()) continue;
      auto p = patient_of_.at(tx.sender());
      auto& pat = patients_[p];
      const auto& mb = node::open_patient_block(state_, tx, *miners_[receiptor].actor, miners_[leader_].id, next);
      (void)mb;
      pat.registered = true;
      pat.registrar = receiptor;
      pat.institutions.insert(receiptor);
      touch(pat.actor->public_key(), next);
      bump(miners_[receiptor].tr, height / cfg_.chunk);
      ++result_.registered;
      events_.record(next, pat.actor->name(), "registered", tx.id());
      if (pat.zombie) {
        result_.fraud_fees += tx.fee();
        schedule_zombie_uploads(p);
      }
    }
    end_round(block, creator.id);
    if (view_.pinned_height() >= cfg_.rounds) {
      loop_.stop();
      return;
    }
    start_round();
  }

  void touch(const crypto::PublicKey& patient, std::uint64_t r) {
    auto prev = view_.last_microblock(r).value_or(view_.pinned()[r - 1].hash());
    state_.set_linkage(patient, r, prev);
    view_.record_microblock(r, state_.microblock(patient)->hash(group_param_));
  }

  void end_round(const KeyBlock& block, const std::string& creator) {
    auto r = block.height;
    double end_s = static_cast<double>(loop_.now()) / 1e6;
    RoundRow row;
    row.round = r;
    row.start_s = tally_.start_s;
    row.end_s = end_s;
    row.keyblock_miner = creator;
    row.leader = miners_[leader_].id;
    for (std::size_t k = 0; k < group_.members.size(); ++k)
      row.group += (k ? ";" : "") + group_.members[k].id;
    row.register_pinned = block.register_txs.size();
    row.records_pinned = tally_.records;
    double dur = std::max(end_s - tally_.start_s, 1e-6);
    row.keyblock_tps = static_cast<double>(row.register_pinned) / dur;
    row.microblock_tps = static_cast<double>(row.records_pinned) / dur;
    row.pending = scheduler_.pending();
    row.pin_failures = tally_.pin_failures;
    // anything queued for three or more rounds counts as a stall
    for (const auto& [id, q] : scheduler_.queues)
      for (const auto& p : q)
        if (r + 1 >= p.submit_round + 3) tally_.stalled = true;
    row.stalled = tally_.stalled;
    row.conflicts = result_.conflicts;
    row.max_latency_rounds = tally_.max_latency;
    if (cfg_.adversary != Adversary::None) {
      const auto& adv = miners_[cfg_.adversary_miner].id;
      for (const auto& mem : group_.members)
        if (mem.id == adv) {
          row.adversary_in_group = true;
          row.adversary_weight = mem.weight / group_.total_weight();
        }
    }
    if (row.stalled) ++result_.stalled_rounds;
    result_.rounds.push_back(row);

    update_reputation(r);
    for (auto& m : miners_) {
      auto got = round_rewards_[m.id];
      cumulative_[m.id] += got;
      result_.rewards.push_back({r, m.id, got, cumulative_[m.id]});
    }
    round_rewards_.clear();
  }

  void update_reputation(std::uint64_t r) {
    auto L = view_.pinned_height();
    std::size_t chunks = static_cast<std::size_t>((L + cfg_.chunk - 1) / cfg_.chunk);
    std::vector<std::uint64_t> lens(chunks, cfg_.chunk);
    if (L % cfg_.chunk) lens.back() = L % cfg_.chunk;
    consensus::ReputationParams params{cfg_.a, cfg_.lambda};
    for (auto& m : miners_) {
      m.created.resize(chunks, 0);
      m.tr.resize(chunks, 0);
      m.tml.resize(chunks, 0);
      consensus::MinerHistory hist{m.honest_seen_by_r1, m.created, lens};
      m.r1 = m.joined ? r1_model_->score(hist) : 0.0;
      m.honest_seen_by_r1 = m.honest;
      consensus::ChunkStats stats{cfg_.chunk, L, state_.microblock_count(), state_.record_tx_count(), m.tr, m.tml};
      try {
        m.r2 = m.joined ? consensus::compute_r2(stats, m.honest, params) : 0.0;
      } catch (const Error&) {
        m.r2 = 0.0;  // not enough history yet
      }
      m.R = consensus::combine_reputation(m.r1, m.r2);
      result_.reputation.push_back({r, m.id, m.r1, m.r2, m.R, group_.contains(m.id)});
    }
  }

  // ---- patients and transactions ----

  void schedule_registrations() {
    Time t = 0;
    for (std::size_t k = 0; k < patients_.size(); ++k) {
      t += static_cast<Time>(-std::log(1.0 - arrivals_.unit()) / cfg_.register_rate * 1e6);
      loop_.schedule(t, Phase::Arrival, [this, k] { submit_register(k); });
    }
  }

  void submit_register(std::size_t k) {
    auto& p = patients_[k];
    auto tx = p.actor->make_register(round(), cfg_.register_fee, group_param_);
    patient_of_[p.actor->public_key()] = k;
    mempool_.emplace_back(tx, p.home);
    events_.record(round(), p.actor->name(), "register", tx.id());
  }

  void schedule_next_arrival() {
    if (cfg_.tx_rate <= 0) return;
    auto gap = static_cast<Time>(-std::log(1.0 - arrivals_.unit()) / cfg_.tx_rate * 1e6);
    loop_.after(std::max<Time>(gap, 1), Phase::Arrival, [this] {
      arrival();
      if (!loop_.stopped()) schedule_next_arrival();
    });
  }

  void schedule_zombie_uploads(std::size_t k) {
    for (std::size_t u = 0; u < cfg_.zombie_uploads; ++u)
      loop_.after((u + 1) * cfg_.delta_steps * cfg_.step_us / 2, Phase::Arrival,
                  [this, k] { upload(k, cfg_.adversary_miner); });
  }

  void arrival() {
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < patients_.size(); ++k)
      if (patients_[k].registered && !patients_[k].zombie) ready.push_back(k);
    // draw everything up front so the random stream does not depend on the branch
    double u = arrivals_.unit();
    double v = arrivals_.unit();
    auto pick = arrivals_.next();
    auto pick2 = arrivals_.next();
    if (ready.empty()) return;
    auto k = ready[pick % ready.size()];
    auto& p = patients_[k];
    if (u < cfg_.label_prob && !p.records.empty()) {
      label(k, p.records[pick2 % p.records.size()]);
    } else if (u < cfg_.label_prob + cfg_.share_prob && !p.records.empty()) {
      share(k, p.records[pick2 % p.records.size()], pick2 / 7);
    } else {
      std::size_t inst = p.home;
      if (v < cfg_.case3_prob) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < miners_.size(); ++i)
          if (i != p.home && !is_flash(i)) others.push_back(i);
        if (!others.empty()) inst = others[pick2 % others.size()];
      }
      upload(k, inst);
    }
  }

  std::string new_tag(const Patient& p, std::size_t inst, const Bytes& plaintext) {
    auto tag = "rec" + std::to_string(next_tag_++);
    if (cfg_.taint) taint_.track(tag, plaintext, {p.actor->name(), miners_[inst].id});
    return tag;
  }

  void observe_store(std::size_t inst, const Transaction& tx) {
    if (!cfg_.taint) return;
    const auto* rec = tx.record();
    taint_.observe("offchain:" + miners_[inst].id, miners_[inst].actor->store().get(rec->pointer));
  }

  void upload(std::size_t k, std::size_t inst) {
    auto& p = patients_[k];
    auto rec = node::synthetic_record(arrivals_, cfg_.record_size, miners_[inst].id, p.actor->name(), round());
    auto tag = new_tag(p, inst, rec.plaintext);
    auto tx = node::upload(*p.actor, *miners_[inst].actor, rec, state_, round(), cfg_.tx_fee);
    observe_store(inst, tx);
    events_.record(round(), p.actor->name(), inst == p.home ? "upload" : "upload-visit", tx.id());
    scheduler_.submit(miners_[inst].id, Pending{tx, k, inst, round(), tag});
  }

  void label(std::size_t k, const RecordRef& ref) {
    auto& p = patients_[k];
    auto rec = node::synthetic_record(arrivals_, cfg_.record_size, miners_[ref.institution].id, p.actor->name(), round());
    auto tag = new_tag(p, ref.institution, rec.plaintext);
    auto tx = node::label(*p.actor, *miners_[ref.institution].actor, ref.tx_id, rec, state_, round(), cfg_.tx_fee);
    observe_store(ref.institution, tx);
    events_.record(round(), p.actor->name(), "label", tx.id());
    scheduler_.submit(miners_[ref.institution].id, Pending{tx, k, ref.institution, round(), tag});
  }

  void share(std::size_t k, const RecordRef& ref, std::uint64_t pick) {
    auto& p = patients_[k];
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < miners_.size(); ++i)
      if (i != ref.institution && !is_flash(i)) targets.push_back(i);
    if (targets.empty()) return;
    auto target = miners_[targets[pick % targets.size()]].id;
    if (cfg_.taint) taint_.authorize(ref.tag, target);
    auto got = node::share(*p.actor, *miners_[ref.institution].actor, target, {ref.tx_id}, state_,
                           cfg_.taint ? &taint_ : nullptr);
    ++result_.shares;
    events_.record(round(), p.actor->name(), "share:" + miners_[ref.institution].id + "->" + target, ref.tx_id);
  }

  void batch_timer() {
    std::map<std::string, double> reps;
    for (const auto& m : miners_) reps[m.id] = m.R;
    auto batch = consensus::schedule_batch(scheduler_, reps);
    std::vector<consensus::Scheduled<Pending>> failed;
    for (auto& item : batch)
      if (!process(item.item)) failed.push_back(std::move(item));
    // unpinned work goes back to the head of its queue, order kept
    for (auto it = failed.rbegin(); it != failed.rend(); ++it)
      scheduler_.queues[it->institution].push_front(std::move(it->item));
    if (!loop_.stopped()) loop_.after(cfg_.delta_steps * cfg_.step_us, Phase::Timer, [this] { batch_timer(); });
  }

  bool process(Pending& item) {
    auto& tx = item.tx;
    auto verdict = ledger::validate_tx(tx, state_);
    if (!verdict.ok()) {
      log(miners_[item.receiptor].id, std::string("drop-") + std::string(ledger::to_string(verdict.reason)),
          short_hex(tx.id()));
      return true;  // dropped, not retried
    }
    std::vector<consensus::Vote> votes;
    for (const auto& mem : group_.members) {
      auto i = index_of(mem.id);
      if (is_inhibitor(i) && item.receiptor != i) continue;  // serves only its own institution
      votes.push_back(consensus::cast_vote(mem.id, miners_[i].actor->signer(), tx.id()));
    }
    // votes are collected over two link delays; draw them for the latency model
    (void)votes_rng_.uniform_between(cfg_.delay_min_us, cfg_.delay_max_us);
    auto outcome = consensus::pin(tx.id(), votes, group_);
    if (!outcome.pinned()) {
      ++tally_.pin_failures;
      ++result_.pin_failures;
      tally_.stalled = true;
      return false;
    }
    auto& p = patients_[item.patient];
    const auto& pk = p.actor->public_key();
    const auto* rec = tx.record();
    auto inst = by_key_.at(rec->institution);
    if (!p.institutions.count(inst)) {
      node::admit_institution(state_, pk, *miners_[p.registrar].actor, *miners_[inst].actor);
      p.institutions.insert(inst);
    }
    ledger::PinnedTransaction entry{tx, *outcome.certificate};
    state_.append(pk, entry, group_);
    touch(pk, round());
    p.pinned_ids.push_back(tx.id());
    p.records.push_back({tx.id(), inst, item.tag});
    if (cfg_.taint) taint_.observe("chain", tx.encoded());

    consensus::FeeSchedule fees{cfg_.mining_reward, cfg_.creator_share};
    auto rewards = consensus::microblock_rewards({entry}, miners_[leader_].id, group_, fees);
    if (consensus::total(rewards) != tx.fee()) throw InvariantViolation("microblock reward not conserved");
    for (const auto& [id, amt] : rewards) {
      miners_[index_of(id)].summary.fee_reward += amt;
      round_rewards_[id] += amt;
    }
    bump(miners_[item.receiptor].tml, chunk_index());
    ++tally_.records;
    ++result_.records_pinned;
    if (p.zombie) result_.fraud_fees += tx.fee();
    auto latency = round() - item.submit_round;
    tally_.max_latency = std::max(tally_.max_latency, latency);
    auto& s = miners_[item.receiptor].summary;
    s.max_latency_rounds = std::max(s.max_latency_rounds, latency);
    result_.latencies.push_back({item.submit_round, round(), miners_[item.receiptor].id});
    events_.record(round(), miners_[leader_].id, "pinned", tx.id());
    return true;
  }

  // ---- wrap-up ----

  void finish() {
    bool first_read = true;
    for (std::size_t k = 0; k < patients_.size(); ++k) {
      const auto& p = patients_[k];
      if (!p.registered) continue;
      auto before = state_.access_count();
      auto hist = node::retrieve_history(state_, p.actor->public_key());
      auto reads = state_.access_count() - before;
      result_.history_reads_min = first_read ? reads : std::min(result_.history_reads_min, reads);
      result_.history_reads_max = std::max(result_.history_reads_max, reads);
      first_read = false;
      if (hist.size() != p.pinned_ids.size()) {
        result_.histories_complete = false;
        continue;
      }
      for (std::size_t i = 0; i < hist.size(); ++i)
        if (hist[i].tx_id != p.pinned_ids[i]) result_.histories_complete = false;
    }
    if (cfg_.taint) {
      result_.taint_leaks = taint_.leaks().size();
      result_.tracked_records = taint_.tracked();
    }
    for (auto& m : miners_) {
      m.summary.honest = m.honest;
      m.summary.r1 = m.r1;
      m.summary.r2 = m.r2;
      m.summary.R = m.R;
      result_.miners.push_back(m.summary);
    }
    result_.events = events_.lines();
    result_.simulated_seconds = static_cast<double>(loop_.now()) / 1e6;
    result_.events_executed = loop_.executed();
    if (result_.conflicts > 0) throw InvariantViolation("conflicting keyblocks were both pinned");
    if (!result_.histories_complete) throw InvariantViolation("patient history incomplete");
    if (result_.taint_leaks > 0) throw InvariantViolation("record plaintext reached an unauthorized holder");
  }

  ScenarioConfig cfg_;
  Rng rng_;
  Rng arrivals_;
  Rng votes_rng_;
  EventLoop loop_;
  Network net_;
  crypto::BilinearGroup group_param_;
  ledger::ChainState state_;
  mining::ChainView view_;
  std::unique_ptr<consensus::R1Provider> r1_model_;
  Hash32 target_;

  std::vector<Miner> miners_;
  std::vector<Patient> patients_;
  std::map<crypto::PublicKey, std::size_t> by_key_;
  std::map<crypto::PublicKey, std::size_t> patient_of_;
  std::vector<std::pair<Transaction, std::size_t>> mempool_;
  consensus::SchedulerState<Pending> scheduler_;
  ledger::ConsensusGroup group_;
  std::size_t leader_ = 0;
  bool window_open_ = false;
  std::map<std::uint64_t, Hash32> certified_;
  RoundTally tally_;
  std::map<std::string, Amount> round_rewards_, cumulative_;
  node::TaintTracker taint_;
  node::EventLog events_;
  std::uint64_t next_tag_ = 0;
  ScenarioResult result_;
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  return Simulation(config).run();
}

}  // namespace spchain::sim
