#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spchain::sim {

struct BenchParams {
  std::vector<double> block_sizes_mb{1, 2, 4};
  std::vector<std::size_t> group_sizes{4, 8, 16, 28};
  double keyblock_interval_s = 10.0;
  std::uint64_t link_delay_us = 10'000;  // fixed, no jitter
  double uplink_bytes_per_s = 12'500'000.0;
  std::uint64_t verify_us = 50;  // per signature or tx check
  std::uint64_t sign_us = 25;
  std::size_t record_size = 2048;
};

struct BenchRow {
  double block_size_mb = 0;
  std::size_t group_size = 0;
  std::size_t register_tx_bytes = 0;
  std::size_t entry_bytes = 0;  // medical tx plus its certificate
  std::size_t keyblock_txs = 0;
  double keyblock_tps = 0;
  std::size_t batch_txs = 0;
  double batch_seconds = 0;
  double microblock_tps = 0;
};

// One row per (block size, group size) cell; throws ConfigError on an empty matrix.
std::vector<BenchRow> bench_throughput(const BenchParams& params);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace spchain::sim
