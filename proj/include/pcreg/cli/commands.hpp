#pragma once

#include <string>

#include "pcreg/cli/config.hpp"

namespace pcreg::cli {

// Stable exit-code contract for harnesses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // usage / config error
inline constexpr int kExitIo = 2;         // unreadable or malformed files
inline constexpr int kExitAlgo = 3;       // algorithmic: empty seeds, mining failed, diverged
inline constexpr int kExitEstimator = 4;  // algorithmic: estimator failure

int run_synth(const RunConfig& config, const std::string& scan_dir, const std::string& out_dir,
              int count);
int run_mine(const RunConfig& config, const std::string& corpus_dir, const std::string& out_dir);
int run_register(const RunConfig& config, const std::string& cloud_a, const std::string& cloud_b,
                 const std::string& head_path, const std::string& report_path);
int run_train(const RunConfig& config, const std::string& corpus_dir,
              const std::string& labels_dir, const std::string& out_dir);
int run_bench(const RunConfig& config, const std::string& corpus_dir,
              const std::string& head_path, const std::string& labels_dir,
              const std::string& out_dir);

}  // namespace pcreg::cli
