#pragma once

#include <filesystem>
#include <string>

#include "spchain/sim/simulation.hpp"

namespace spchain::sim {

inline constexpr const char* kCsvHeader = "# spchain-metrics v1";

std::string metrics_csv(const ScenarioResult& r);
std::string reputation_csv(const ScenarioResult& r);
std::string rewards_csv(const ScenarioResult& r);
std::string latency_csv(const ScenarioResult& r);
std::string summary_text(const ScenarioResult& r);
// Round-trips through parse_config.
std::string format_config(const ScenarioConfig& c);

// metrics.csv, reputation.csv, rewards.csv, latency.csv, events.log, summary.txt
void write_run(const ScenarioResult& r, const std::filesystem::path& dir);

void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spchain::sim
