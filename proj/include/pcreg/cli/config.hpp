#pragma once

#include <cstdint>
#include <string>

namespace pcreg {

// All tunables in one flat bag. A config file holds `key = value` lines
// with # comments; CLI flags override file keys. Validation is fail-fast:
// every key is checked against its module's preconditions before any work
// starts.
struct RunConfig {
    // views
    double voxel = 0.3;
    double sparse_factor = 2.0;
    // descriptors
    double desc_radius = 1.0;
    int normal_k = 10;
    int desc_bins = 11;
    // projection heads
    int head_dim = 16;
    double head_init_sigma = 0.01;
    // estimator
    std::string estimator = "soc";
    double tau_c = 0.6;
    std::uint64_t n_seeds = 20;
    std::uint64_t ransac_iters = 8192;
    // clustering
    std::uint64_t top_k = 50;
    std::uint64_t max_iters = 8;
    double seed_threshold = 0.7;
    std::uint64_t n_p = 128;
    // self-adaption
    int adapt_steps = 10;
    double adapt_lr = 1e-2;
    double temperature = 0.07;
    double nn_radius = 0.6;
    // losses / training
    double lambda_corr = 1.0;
    double lambda_1 = 0.5;
    double margin_pos = 0.1;
    double margin_neg = 1.4;
    double train_lr = 1e-3;
    int epochs = 10;
    // synthetic pairs
    double overlap = 0.5;
    std::string crop_mode = "halfspace";
    double period = 10.0;
    double duty = 0.7;
    double max_rot_deg = 30.0;
    double max_trans_m = 5.0;
    double noise_sigma = 0.0;
    // metrics
    double rre_thresh = 5.0;
    double rte_thresh = 2.0;
    double ir_thresh = 0.6;
    // run control
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;  // throws std::invalid_argument with the offending key
};

// Applies `key = value` onto `config`; unknown keys and unparsable values
// are rejected.
void apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

// Defaults overlaid with the file's keys.
RunConfig load_config_file(const std::string& path);

}  // namespace pcreg
