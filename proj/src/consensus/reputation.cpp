#include "spchain/consensus/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spchain/error.hpp"

namespace spchain::consensus {

double service_curve(double x, double a, double lambda) {
  if (!(lambda > 0)) throw Error("lambda must be positive");
  double d = x - a;
  return 0.5 * (1.0 + d / (lambda + std::fabs(d)));
}

namespace {

// root-mean-square deviation of per-chunk rates v_i / c from `mean`
double rate_deviation(const std::vector<std::uint64_t>& v, double c, double mean) {
  double acc = 0;
  for (auto x : v) {
    double d = static_cast<double>(x) / c - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

double compute_r2(const ChunkStats& s, bool honest, const ReputationParams& params) {
  if (s.chunks() == 0 || s.microblocks == 0 || s.transactions == 0) throw Error("insufficient history");
  if (s.tml.size() != s.tr.size()) throw Error("chunk counter length mismatch");
  if (s.chunk_size == 0) throw Error("chunk size must be positive");
  if (!honest) return 0.0;
  double c = static_cast<double>(s.chunk_size);
  double mean_tr = static_cast<double>(std::accumulate(s.tr.begin(), s.tr.end(), std::uint64_t{0})) /
                   static_cast<double>(s.microblocks);
  double mean_tml = static_cast<double>(std::accumulate(s.tml.begin(), s.tml.end(), std::uint64_t{0})) /
                    static_cast<double>(s.transactions);
  double q1 = mean_tr / (1.0 + rate_deviation(s.tr, c, mean_tr));
  double q2 = mean_tml / (1.0 + rate_deviation(s.tml, c, mean_tml));
  double x = q1 * q2 * static_cast<double>(s.chain_length);
  return std::min(1.0, service_curve(x, params.a, params.lambda));
}

double PinnedShareR1::score(const MinerHistory& h) const {
  if (!h.honest) return 0.0;
  auto mine = std::accumulate(h.created.begin(), h.created.end(), std::uint64_t{0});
  auto total = std::accumulate(h.chunk_len.begin(), h.chunk_len.end(), std::uint64_t{0});
  if (total == 0) return 0.0;
  return std::clamp(static_cast<double>(mine) / static_cast<double>(total), 0.0, 1.0);
}

double RegularityR1::score(const MinerHistory& h) const {
  if (!h.honest || cap_ == 0) return 0.0;
  std::uint64_t got = 0, possible = 0;
  for (std::size_t i = 0; i < h.chunk_len.size(); ++i) {
    auto cap = std::min(cap_, h.chunk_len[i]);
    auto k = i < h.created.size() ? h.created[i] : 0;
    got += std::min(k, cap);
    possible += cap;
  }
  if (possible == 0) return 0.0;
  return static_cast<double>(got) / static_cast<double>(possible);
}

std::unique_ptr<R1Provider> make_r1_provider(const std::string& name, std::uint64_t cap) {
  if (name == "share") return std::make_unique<PinnedShareR1>();
  if (name == "regularity") return std::make_unique<RegularityR1>(cap);
  throw ConfigError("unknown r1 model: " + name);
}

double combine_reputation(double r1, double r2) {
  if (r1 < 0 || r1 > 1 || r2 < 0 || r2 > 1) throw Error("reputation component out of range");
  return 0.5 * (r1 + r2);
}

}  // namespace spchain::consensus
