#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "waverisk/besov.hpp"
#include "waverisk/noise.hpp"
#include "waverisk/risk.hpp"
#include "waverisk/rng.hpp"

namespace waverisk {

// Experiment description parsed from the sectioned key-value format
// documented in the README. Parse and validation problems throw config_error;
// an unreadable file throws data_error.
struct ExperimentConfig {
  std::string kind = "minimax";  // rate | minimax | ratio
  std::vector<std::uint64_t> n_list = {1024};
  std::uint64_t reps = 2000;
  SeedSpec seed = {1, 0};
  std::string out = "report.csv";
  std::uint64_t calibrate_n = 0;  // 0: use the configured C directly
  int threads = 0;                // 0: runtime default
  BesovSpec ball;
  NoiseSpec noise;
  PipelineConfig pipe;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

}  // namespace waverisk
