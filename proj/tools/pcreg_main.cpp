#include <CLI11.hpp>
#include <iostream>

#include "pcreg/cli/commands.hpp"
#include "pcreg/cli/config.hpp"
#include "pcreg/core/errors.hpp"

using namespace pcreg;

int main(int argc, char** argv) {
    CLI::App app{"Point-cloud registration toolkit: synthetic pair generation, "
                 "pseudo-label mining, registration, student training, benchmarking"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    RunConfig config;

    // Global flags; explicit flags override config-file keys.
    app.add_option("--config", config_path, "Flat key = value config file");
    auto* opt_seed = app.add_option("--seed", config.seed, "Run seed");
    auto* opt_jobs = app.add_option("--jobs", config.jobs, "Worker threads for pair loops");
    app.add_option("--out", out_dir, "Output directory");
    auto* opt_rre = app.add_option("--rre-thresh", config.rre_thresh, "Success RRE threshold (deg)");
    auto* opt_rte = app.add_option("--rte-thresh", config.rte_thresh, "Success RTE threshold (m)");
    auto* opt_voxel = app.add_option("--voxel", config.voxel, "Dense-view voxel size (m)");
    auto* opt_sf = app.add_option("--sparse-factor", config.sparse_factor, "Sparse-view voxel factor");
    auto* opt_topk = app.add_option("--top-k", config.top_k, "Clustering admissions per iteration");
    auto* opt_iters = app.add_option("--max-iters", config.max_iters, "Clustering iteration cap");
    auto* opt_tau = app.add_option("--tau-c", config.tau_c, "Compatibility / residual threshold (m)");
    auto* opt_lc = app.add_option("--lambda-corr", config.lambda_corr, "Correspondence-loss weight");
    auto* opt_l1 = app.add_option("--lambda-1", config.lambda_1, "Sparse-view loss weight");
    auto* opt_est = app.add_option("--estimator", config.estimator, "Pose estimator: soc|ransac");
    auto* opt_noise = app.add_option("--noise-sigma", config.noise_sigma, "Synthetic noise sigma (m)");
    auto* opt_overlap = app.add_option("--overlap", config.overlap, "Synthetic overlap target");
    auto* opt_rot = app.add_option("--max-rot", config.max_rot_deg, "Synthetic max rotation (deg)");
    auto* opt_trans = app.add_option("--max-trans", config.max_trans_m, "Synthetic max translation (m)");
    auto* opt_epochs = app.add_option("--epochs", config.epochs, "Training epochs");
    auto* opt_lr = app.add_option("--train-lr", config.train_lr, "Training learning rate");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic pair corpus from scans");
    std::string scan_dir;
    int count = 0;
    synth->add_option("--scans", scan_dir, "Directory of .bin/.ply scans")->required();
    synth->add_option("--count", count, "Number of pairs to generate")->required();

    auto* mine = app.add_subcommand("mine", "Mine pseudo-labels for a pair corpus");
    std::string corpus_dir;
    mine->add_option("--corpus", corpus_dir, "Corpus directory with manifest.txt")->required();

    auto* reg = app.add_subcommand("register", "Register two clouds, print the pose");
    std::string cloud_a, cloud_b, head_path, report_path;
    reg->add_option("cloud_a", cloud_a, "Source cloud (.bin/.ply)")->required();
    reg->add_option("cloud_b", cloud_b, "Target cloud (.bin/.ply)")->required();
    reg->add_option("--head", head_path, "Projection head file (default: seeded teacher)");
    reg->add_option("--report", report_path, "Optional registration report CSV");

    auto* train = app.add_subcommand("train", "Train a student head from pseudo-labels");
    std::string labels_dir;
    train->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    train->add_option("--labels", labels_dir, "Directory of .label files")->required();

    auto* bench = app.add_subcommand("bench", "Benchmark registration over a corpus");
    bench->add_option("--corpus", corpus_dir, "Corpus directory with ground truth")->required();
    bench->add_option("--head", head_path, "Projection head file (default: seeded teacher)");
    bench->add_option("--labels", labels_dir, "Label directory for teacher IR");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            // Explicit CLI flags win over file keys.
            const RunConfig cli_values = config;
            config = load_config_file(config_path);
            if (opt_seed->count()) config.seed = cli_values.seed;
            if (opt_jobs->count()) config.jobs = cli_values.jobs;
            if (opt_rre->count()) config.rre_thresh = cli_values.rre_thresh;
            if (opt_rte->count()) config.rte_thresh = cli_values.rte_thresh;
            if (opt_voxel->count()) config.voxel = cli_values.voxel;
            if (opt_sf->count()) config.sparse_factor = cli_values.sparse_factor;
            if (opt_topk->count()) config.top_k = cli_values.top_k;
            if (opt_iters->count()) config.max_iters = cli_values.max_iters;
            if (opt_tau->count()) config.tau_c = cli_values.tau_c;
            if (opt_lc->count()) config.lambda_corr = cli_values.lambda_corr;
            if (opt_l1->count()) config.lambda_1 = cli_values.lambda_1;
            if (opt_est->count()) config.estimator = cli_values.estimator;
            if (opt_noise->count()) config.noise_sigma = cli_values.noise_sigma;
            if (opt_overlap->count()) config.overlap = cli_values.overlap;
            if (opt_rot->count()) config.max_rot_deg = cli_values.max_rot_deg;
            if (opt_trans->count()) config.max_trans_m = cli_values.max_trans_m;
            if (opt_epochs->count()) config.epochs = cli_values.epochs;
            if (opt_lr->count()) config.train_lr = cli_values.train_lr;
        }
        config.validate();
    } catch (const IoError& e) {
        std::cerr << "config: " << e.what() << "\n";
        return cli::kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return cli::kExitUsage;
    }

    if (synth->parsed()) return cli::run_synth(config, scan_dir, out_dir, count);
    if (mine->parsed()) return cli::run_mine(config, corpus_dir, out_dir);
    if (reg->parsed()) return cli::run_register(config, cloud_a, cloud_b, head_path, report_path);
    if (train->parsed()) return cli::run_train(config, corpus_dir, labels_dir, out_dir);
    if (bench->parsed()) return cli::run_bench(config, corpus_dir, head_path, labels_dir, out_dir);
    return cli::kExitUsage;
}
