#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "spchain/error.hpp"
#include "spchain/sim/attacks.hpp"
#include "spchain/sim/bench.hpp"
#include "spchain/sim/config.hpp"
#include "spchain/sim/report.hpp"

namespace fs = std::filesystem;
using namespace spchain;
using namespace spchain::sim;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInvariant = 3;

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const fs::path& out) {
  auto cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  auto result = run_scenario(cfg);
  write_run(result, out);
  fmt::print("rounds={} records={} conflicts={} stalled_rounds={} out={}\n", result.rounds.size(),
             result.records_pinned, result.conflicts, result.stalled_rounds, out.string());
  return kOk;
}

int cmd_bench(const BenchParams& params, const fs::path& out) {
  auto rows = bench_throughput(params);
  auto csv = bench_csv(rows);
  fs::create_directories(out);
  write_file(out / "bench.csv", csv);
  std::fputs(csv.c_str(), stdout);
  return kOk;
}

int cmd_attack(const std::string& type, const std::string& config, std::size_t seeds, const std::optional<fs::path>& out) {
  auto cfg = load_config(config);
  auto kind = parse_adversary(type);
  auto emit = [&](const std::string& name, const std::string& text) {
    std::fputs(text.c_str(), stdout);
    if (out) {
      fs::create_directories(*out);
      write_file(*out / name, text);
    }
  };
  switch (kind) {
    case Adversary::Selfish: {
      cfg.validate();
      auto r = selfish_attack(cfg, seeds);
      emit("selfish.csv", selfish_csv(r));
      fmt::print("power={:.4f} adversary_share={:.4f} baseline_share={:.4f} conflicts={}\n", r.power,
                 r.adversary_share, r.baseline_share, r.conflicts);
      break;
    }
    case Adversary::Flash: {
      cfg.adversary = Adversary::Flash;
      cfg.validate();
      emit("flash.txt", flash_text(flash_attack(cfg, seeds)));
      break;
    }
    case Adversary::Fraud: {
      cfg.validate();
      std::vector<std::size_t> curve{0};
      for (std::size_t z = std::max<std::size_t>(cfg.zombies, 1); curve.size() < 4; z *= 2) curve.push_back(z);
      emit("fraud.csv", fraud_csv(fraud_attack(cfg, curve)));
      break;
    }
    case Adversary::Inhibition: {
      cfg.validate();
      emit("inhibition.txt", inhibition_text(inhibition_attack(cfg)));
      break;
    }
    case Adversary::None: throw ConfigError("attack type must name an adversary");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spchain: reputation-gated medical record chain simulator"};
  app.require_subcommand(1);

  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "simulate one scenario and write CSV output");
  run->add_option("--config", run_config, "scenario file (key = value)")->required();
  run->add_option("--seed", run_seed, "override the seed in the file");
  run->add_option("--out", run_out, "output directory");

  BenchParams bench_params;
  std::string bench_out = "out";
  auto* bench = app.add_subcommand("bench", "keyblock and microblock throughput over a block x group matrix");
  bench->add_option("--block-sizes", bench_params.block_sizes_mb, "block sizes in MB")->delimiter(',');
  bench->add_option("--group-sizes", bench_params.group_sizes, "consensus group sizes")->delimiter(',');
  bench->add_option("--keyblock-interval", bench_params.keyblock_interval_s, "seconds between keyblocks");
  bench->add_option("--delay-us", bench_params.link_delay_us, "fixed link delay");
  bench->add_option("--uplink", bench_params.uplink_bytes_per_s, "uplink bytes per second");
  bench->add_option("--verify-us", bench_params.verify_us, "cost of one check");
  bench->add_option("--sign-us", bench_params.sign_us, "cost of one signature");
  bench->add_option("--record-size", bench_params.record_size, "record plaintext bytes");
  bench->add_option("--out", bench_out, "output directory");

  std::string attack_type, attack_config;
  std::size_t attack_seeds = 20;
  std::optional<std::string> attack_out;
  auto* attack = app.add_subcommand("attack", "run an adversary harness");
  attack->add_option("--type", attack_type, "selfish | flash | fraud | inhibition")->required();
  attack->add_option("--config", attack_config, "scenario file")->required();
  attack->add_option("--seeds", attack_seeds, "seeds for selfish and flash");
  attack->add_option("--out", attack_out, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_config, run_seed, run_out);
    if (*bench) return cmd_bench(bench_params, bench_out);
    if (*attack) {
      std::optional<fs::path> out;
      if (attack_out) out = *attack_out;
      return cmd_attack(attack_type, attack_config, attack_seeds, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
