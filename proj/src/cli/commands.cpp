#include "pcreg/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "pcreg/core/errors.hpp"
#include "pcreg/features/descriptor.hpp"
#include "pcreg/geometry/synthetic.hpp"
#include "pcreg/io/scan_io.hpp"
#include "pcreg/losses/training.hpp"
#include "pcreg/metrics/metrics.hpp"
#include "pcreg/mining/mining.hpp"

namespace fs = std::filesystem;

namespace pcreg::cli {

namespace {

constexpr std::uint64_t kTeacherSalt = 0x7ea55eedull;
constexpr std::uint64_t kStudentSalt = 0x57ad5eedull;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t h = seed ^ (k * 0x9E3779B97F4A7C15ull);
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDull;
    h ^= h >> 33;
    return h;
}

PointCloud load_cloud_any(const std::string& path) {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".bin") return read_kitti_bin(path);
    if (ext == ".ply") return read_ply(path);
    throw IoError("unsupported cloud format (want .bin or .ply): " + path);
}

SyntheticPairSpec spec_from(const RunConfig& c) {
    SyntheticPairSpec spec;
    spec.overlap_target = c.overlap;
    spec.crop_mode = c.crop_mode == "spherical" ? CropMode::Spherical : CropMode::HalfSpace;
    spec.periodic_period = c.period;
    spec.periodic_duty = c.duty;
    spec.max_rotation_deg = c.max_rot_deg;
    spec.max_translation_m = c.max_trans_m;
    spec.noise_sigma = c.noise_sigma;
    return spec;
}

DescriptorConfig desc_config_from(const RunConfig& c) {
    DescriptorConfig dc;
    dc.radius = c.desc_radius;
    dc.normal_k = c.normal_k;
    dc.bins_per_feature = c.desc_bins;
    return dc;
}

MiningConfig mining_config_from(const RunConfig& c) {
    MiningConfig mc;
    mc.clustering.top_k = c.top_k;
    mc.clustering.max_iters = c.max_iters;
    mc.clustering.seed_similarity_threshold = c.seed_threshold;
    mc.clustering.n_p = c.n_p;
    mc.adaption.steps = c.adapt_steps;
    mc.adaption.lr = c.adapt_lr;
    mc.adaption.temperature = c.temperature;
    mc.nn_radius = c.nn_radius;
    mc.base_voxel = c.voxel;
    mc.sparse_factor = c.sparse_factor;
    return mc;
}

EstimatorParams estimator_params_from(const RunConfig& c, std::uint64_t pair_seed) {
    EstimatorParams ep;
    ep.tau_c = c.tau_c;
    ep.n_seeds = c.n_seeds;
    ep.ransac_iters = c.ransac_iters;
    ep.rng_seed = pair_seed;
    return ep;
}

ProjectionHead teacher_head(const RunConfig& c, int desc_dim) {
    return ProjectionHead::near_identity(c.head_dim, desc_dim, mix_seed(c.seed, kTeacherSalt),
                                         c.head_init_sigma);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

struct ManifestEntry {
    std::string pair_id, p_file, q_file, gt_file;
};

constexpr const char* kManifestHeader = "pcreg-corpus v1";

std::vector<ManifestEntry> read_manifest(const std::string& corpus_dir) {
    const std::string path = (fs::path(corpus_dir) / "manifest.txt").string();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kManifestHeader) {
        throw IoError("bad manifest header: " + path);
    }
    std::vector<ManifestEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        ManifestEntry e;
        if (!(ss >> e.pair_id >> e.p_file >> e.q_file >> e.gt_file)) {
            throw IoError("bad manifest row: " + line);
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

// Per-pair artifacts of one benchmark/mining registration run.
struct PairPipeline {
    MixedViews views;
    FeatureField desc_p, desc_q;
    MiningOutcome outcome;
};

PairPipeline run_pair_mining(const RunConfig& config, const PointCloud& p_raw,
                             const PointCloud& q_raw, const ProjectionHead& head,
                             const PoseEstimator& estimator, std::uint64_t pair_seed) {
    PairPipeline pp;
    pp.views = build_mixed_density_views(p_raw, q_raw, config.voxel, config.sparse_factor);
    const DescriptorConfig dc = desc_config_from(config);
    pp.desc_p = extract_descriptors(pp.views.p_dense, dc);
    pp.desc_q = extract_descriptors(pp.views.q_dense, dc);
    pp.outcome = mine_pseudo_labels(pp.views.p_dense, pp.views.q_dense, pp.desc_p, pp.desc_q,
                                    head, mining_config_from(config),
                                    estimator, estimator_params_from(config, pair_seed));
    return pp;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

int run_synth(const RunConfig& config, const std::string& scan_dir, const std::string& out_dir,
              int count) {
    if (count < 0) {
        std::cerr << "synth: count must be >= 0\n";
        return kExitUsage;
    }
    std::vector<std::string> scans;
    try {
        for (const auto& entry : fs::directory_iterator(scan_dir)) {
            const std::string ext = entry.path().extension().string();
            if (ext == ".bin" || ext == ".ply") scans.push_back(entry.path().string());
        }
    } catch (const fs::filesystem_error& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return kExitIo;
    }
    std::sort(scans.begin(), scans.end());
    if (scans.empty() && count > 0) {
        std::cerr << "synth: no .bin/.ply scans in " << scan_dir << "\n";
        return kExitIo;
    }

    try {
        fs::create_directories(out_dir);
        const SyntheticPairSpec spec = spec_from(config);
        std::vector<std::string> rows;
        int skipped = 0;
        for (int k = 0; k < count; ++k) {
            char id[32];
            std::snprintf(id, sizeof(id), "pair_%04d", k);
            const PointCloud scan = load_cloud_any(scans[static_cast<std::size_t>(k) % scans.size()]);
            SyntheticPair sp;
            try {
                sp = make_synthetic_pair(scan, spec,
                                         mix_seed(config.seed, static_cast<std::uint64_t>(k)));
            } catch (const GenerationFailedError& e) {
                std::cerr << "synth: " << id << " skipped: " << e.what() << "\n";
                ++skipped;
                continue;
            }
            const std::string p_file = std::string(id) + "_p.bin";
            const std::string q_file = std::string(id) + "_q.bin";
            const std::string gt_file = std::string(id) + "_gt.txt";
            write_kitti_bin((fs::path(out_dir) / p_file).string(), sp.p);
            write_kitti_bin((fs::path(out_dir) / q_file).string(), sp.q);
            write_pose_file((fs::path(out_dir) / gt_file).string(), {sp.t_gt});
            rows.push_back(std::string(id) + " " + p_file + " " + q_file + " " + gt_file);
        }
        std::ofstream manifest((fs::path(out_dir) / "manifest.txt").string(), std::ios::trunc);
        if (!manifest) throw IoError("cannot write manifest in " + out_dir);
        manifest << kManifestHeader << "\n";
        for (const auto& r : rows) manifest << r << "\n";
        std::cerr << "synth: wrote " << rows.size() << " pairs (" << skipped << " skipped)\n";
    } catch (const IoError& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_mine(const RunConfig& config, const std::string& corpus_dir, const std::string& out_dir) {
    std::vector<ManifestEntry> entries;
    try {
        entries = read_manifest(corpus_dir);
        fs::create_directories(out_dir);
    } catch (const IoError& e) {
        std::cerr << "mine: " << e.what() << "\n";
        return kExitIo;
    }

    struct Row {
        std::string status = "error";
        double seed_ir = -1, pass1_ir = -1, final_ir = -1, rre_deg = -1, rte_m = -1;
        bool ok = false;
        std::string pair_id;
        PseudoLabel label;
    };
    std::vector<Row> rows(entries.size());

    const DescriptorConfig dc = desc_config_from(config);
    const ProjectionHead head = teacher_head(config, dc.dim());
    const auto estimator = make_estimator(config.estimator);

    parallel_for(entries.size(), config.jobs, [&](std::size_t idx) {
        const ManifestEntry& e = entries[idx];
        Row& row = rows[idx];
        row.pair_id = e.pair_id;
        try {
            const PointCloud p_raw = load_cloud_any((fs::path(corpus_dir) / e.p_file).string());
            const PointCloud q_raw = load_cloud_any((fs::path(corpus_dir) / e.q_file).string());
            bool has_gt = false;
            RigidTransform t_gt;
            const std::string gt_path = (fs::path(corpus_dir) / e.gt_file).string();
            if (e.gt_file != "-" && fs::exists(gt_path)) {
                const auto poses = read_pose_file(gt_path);
                if (!poses.empty()) {
                    t_gt = poses.front();
                    has_gt = true;
                }
            }
            const PairPipeline pp = run_pair_mining(config, p_raw, q_raw, head, *estimator,
                                                    mix_seed(config.seed, idx));
            row.label = pp.outcome.label;
            row.ok = true;
            row.status = "ok";
            if (has_gt) {
                row.seed_ir = inlier_ratio(pp.outcome.seeds_pass1, pp.views.p_dense,
                                           pp.views.q_dense, t_gt, config.ir_thresh);
                row.pass1_ir = inlier_ratio(pp.outcome.pass1_inliers, pp.views.p_dense,
                                            pp.views.q_dense, t_gt, config.ir_thresh);
                row.final_ir = inlier_ratio(pp.outcome.label.dense, pp.views.p_dense,
                                            pp.views.q_dense, t_gt, config.ir_thresh);
                row.rre_deg = rre(pp.outcome.label.pose, t_gt);
                row.rte_m = rte(pp.outcome.label.pose, t_gt);
            }
        } catch (const IoError&) {
            row.status = "error_io";
        } catch (const MiningFailedError&) {
            row.status = "error_mining";
        } catch (const std::exception&) {
            row.status = "error";
        }
    });

    // Single writer, deterministic order.
    std::size_t n_ok = 0;
    try {
        std::ofstream csv((fs::path(out_dir) / "mining_report.csv").string(), std::ios::trunc);
        if (!csv) throw IoError("cannot write mining report in " + out_dir);
        csv << "# schema: mining_report v1\n";
        csv << "pair_id,status,seed_ir,pass1_ir,final_ir,rre_deg,rte_m\n";
        for (const auto& row : rows) {
            csv << row.pair_id << "," << row.status;
            for (double v : {row.seed_ir, row.pass1_ir, row.final_ir, row.rre_deg, row.rte_m}) {
                csv << ",";
                if (v >= 0) csv << format_double(v);
            }
            csv << "\n";
            if (row.ok) {
                write_label_file((fs::path(out_dir) / (row.pair_id + ".label")).string(),
                                 row.pair_id, row.label);
                ++n_ok;
            }
        }
    } catch (const IoError& e) {
        std::cerr << "mine: " << e.what() << "\n";
        return kExitIo;
    }
    std::cerr << "mine: " << n_ok << "/" << entries.size() << " pairs labelled\n";
    if (!entries.empty() && n_ok == 0) return kExitAlgo;
    return kExitOk;
}

int run_register(const RunConfig& config, const std::string& cloud_a, const std::string& cloud_b,
                 const std::string& head_path, const std::string& report_path) {
    PointCloud a, b;
    try {
        a = load_cloud_any(cloud_a);
        b = load_cloud_any(cloud_b);
    } catch (const IoError& e) {
        std::cerr << "register: " << e.what() << "\n";
        return kExitIo;
    }
    const DescriptorConfig dc = desc_config_from(config);
    ProjectionHead head;
    try {
        head = head_path.empty() ? teacher_head(config, dc.dim()) : read_head(head_path);
    } catch (const IoError& e) {
        std::cerr << "register: " << e.what() << "\n";
        return kExitIo;
    }
    const auto estimator = make_estimator(config.estimator);

    PairPipeline pp;
    try {
        pp = run_pair_mining(config, a, b, head, *estimator, mix_seed(config.seed, 0));
    } catch (const MiningFailedError& e) {
        std::cerr << "register: " << e.what() << "\n";
        return e.kind == MiningFailureKind::EstimatorFailed ? kExitEstimator : kExitAlgo;
    } catch (const std::exception& e) {
        std::cerr << "register: " << e.what() << "\n";
        return kExitAlgo;
    }

    std::cout << format_pose_row(pp.outcome.label.pose) << "\n";
    if (!report_path.empty()) {
        std::ofstream rep(report_path, std::ios::trunc);
        if (!rep) {
            std::cerr << "register: cannot write report: " << report_path << "\n";
            return kExitIo;
        }
        rep << "# schema: register_report v1\n";
        rep << "n_seeds_pass1,n_seeds_pass2,n_dense,n_sparse,adapted,estimator\n";
        rep << pp.outcome.seeds_pass1.size() << "," << pp.outcome.seeds_pass2.size() << ","
            << pp.outcome.label.dense.size() << "," << pp.outcome.label.sparse.size() << ","
            << (pp.outcome.adapted ? 1 : 0) << "," << estimator->name() << "\n";
    }
    return kExitOk;
}

int run_train(const RunConfig& config, const std::string& corpus_dir,
              const std::string& labels_dir, const std::string& out_dir) {
    std::vector<TrainingPair> stream;
    try {
        const auto entries = read_manifest(corpus_dir);
        fs::create_directories(out_dir);
        const DescriptorConfig dc = desc_config_from(config);
        for (const auto& e : entries) {
            const std::string label_path =
                (fs::path(labels_dir) / (e.pair_id + ".label")).string();
            if (!fs::exists(label_path)) {
                throw IoError("missing label file for " + e.pair_id + ": " + label_path);
            }
            TrainingPair tp;
            tp.pair_id = e.pair_id;
            const PointCloud p_raw = load_cloud_any((fs::path(corpus_dir) / e.p_file).string());
            const PointCloud q_raw = load_cloud_any((fs::path(corpus_dir) / e.q_file).string());
            MixedViews views = build_mixed_density_views(p_raw, q_raw, config.voxel,
                                                         config.sparse_factor);
            tp.p_dense = std::move(views.p_dense);
            tp.q_dense = std::move(views.q_dense);
            tp.p_sparse = std::move(views.p_sparse);
            tp.q_sparse = std::move(views.q_sparse);
            tp.desc_p_dense = extract_descriptors(tp.p_dense, dc);
            tp.desc_q_dense = extract_descriptors(tp.q_dense, dc);
            tp.desc_p_sparse = extract_descriptors(tp.p_sparse, dc);
            tp.desc_q_sparse = extract_descriptors(tp.q_sparse, dc);
            tp.label = read_label_file(label_path).label;
            const std::string gt_path = (fs::path(corpus_dir) / e.gt_file).string();
            if (e.gt_file != "-" && fs::exists(gt_path)) {
                const auto poses = read_pose_file(gt_path);
                if (!poses.empty()) {
                    tp.t_gt = poses.front();
                    tp.has_gt = true;
                }
            }
            stream.push_back(std::move(tp));
        }
    } catch (const IoError& e) {
        std::cerr << "train: " << e.what() << "\n";
        return kExitIo;
    }
    if (stream.empty()) {
        std::cerr << "train: empty corpus\n";
        return kExitIo;
    }

    TrainConfig tc;
    tc.epochs = config.epochs;
    tc.lr = config.train_lr;
    tc.lambda_corr = config.lambda_corr;
    tc.lambda_1 = config.lambda_1;
    tc.margin_pos = config.margin_pos;
    tc.margin_neg = config.margin_neg;
    tc.n_p = config.n_p;
    tc.temperature = config.temperature;
    tc.ir_residual_thresh = config.ir_thresh;
    tc.seed = config.seed;

    const int desc_dim = stream.front().desc_p_dense.dim();
    const ProjectionHead init =
        ProjectionHead::near_identity(config.head_dim, desc_dim,
                                      mix_seed(config.seed, kStudentSalt), config.head_init_sigma);
    const TrainOutcome outcome = train_student_head(init, stream, tc);

    try {
        write_head((fs::path(out_dir) / "student_head.bin").string(), outcome.head);
        std::ofstream log((fs::path(out_dir) / "training_log.csv").string(), std::ios::trunc);
        if (!log) throw IoError("cannot write training log in " + out_dir);
        log << training_log_to_csv(outcome.log);
    } catch (const IoError& e) {
        std::cerr << "train: " << e.what() << "\n";
        return kExitIo;
    }
    if (outcome.diverged) {
        std::cerr << "train: diverged (mean loss exceeded 10x initial); partial log retained\n";
        return kExitAlgo;
    }
    return kExitOk;
}

int run_bench(const RunConfig& config, const std::string& corpus_dir,
              const std::string& head_path, const std::string& labels_dir,
              const std::string& out_dir) {
    std::vector<ManifestEntry> entries;
    try {
        entries = read_manifest(corpus_dir);
        fs::create_directories(out_dir);
    } catch (const IoError& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return kExitIo;
    }
    if (entries.empty()) {
        std::cerr << "bench: empty corpus\n";
        return kExitIo;
    }

    const DescriptorConfig dc = desc_config_from(config);
    ProjectionHead head;
    try {
        head = head_path.empty() ? teacher_head(config, dc.dim()) : read_head(head_path);
    } catch (const IoError& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return kExitIo;
    }
    const auto estimator = make_estimator(config.estimator);
    const auto bins = default_distance_bins();

    struct Result {
        bool has_report = false;
        MetricsReport report;
        double ir = -1.0;
        bool io_error = false;
        bool outside_bins = false;
    };
    std::vector<Result> results(entries.size());

    parallel_for(entries.size(), config.jobs, [&](std::size_t idx) {
        const ManifestEntry& e = entries[idx];
        Result& r = results[idx];
        try {
            const PointCloud p_raw = load_cloud_any((fs::path(corpus_dir) / e.p_file).string());
            const PointCloud q_raw = load_cloud_any((fs::path(corpus_dir) / e.q_file).string());
            const std::string gt_path = (fs::path(corpus_dir) / e.gt_file).string();
            if (e.gt_file == "-" || !fs::exists(gt_path)) throw IoError("missing ground truth");
            const auto poses = read_pose_file(gt_path);
            if (poses.empty()) throw IoError("empty ground truth: " + gt_path);
            const RigidTransform t_gt = poses.front();

            MetricsReport rep;
            rep.pair_id = e.pair_id;
            const double dist = t_gt.translation.norm();
            bool binned = false;
            for (const auto& b : bins) {
                if (b.contains(dist)) {
                    rep.bin = b;
                    binned = true;
                    break;
                }
            }
            if (!binned) {
                r.outside_bins = true;
                return;
            }

            try {
                PairPipeline pp = run_pair_mining(config, p_raw, q_raw, head, *estimator,
                                                  mix_seed(config.seed, idx));
                rep.rre_deg = rre(pp.outcome.label.pose, t_gt);
                rep.rte_m = rte(pp.outcome.label.pose, t_gt);
                if (labels_dir.empty()) {
                    r.ir = inlier_ratio(pp.outcome.label.dense, pp.views.p_dense,
                                        pp.views.q_dense, t_gt, config.ir_thresh);
                } else {
                    const std::string lp =
                        (fs::path(labels_dir) / (e.pair_id + ".label")).string();
                    if (fs::exists(lp)) {
                        const NamedLabel nl = read_label_file(lp);
                        r.ir = inlier_ratio(nl.label.dense, pp.views.p_dense, pp.views.q_dense,
                                            t_gt, config.ir_thresh);
                    }
                }
            } catch (const MiningFailedError&) {
                rep.rre_deg = 180.0;  // counted as a recall failure
                rep.rte_m = 1e9;
            }
            r.report = rep;
            r.has_report = true;
        } catch (const IoError&) {
            r.io_error = true;
        } catch (const std::exception&) {
            r.io_error = true;
        }
    });

    std::vector<MetricsReport> reports;
    double ir_sum = 0.0;
    std::size_t ir_n = 0, io_errors = 0, outside = 0;
    for (const auto& r : results) {
        if (r.io_error) ++io_errors;
        if (r.outside_bins) ++outside;
        if (r.has_report) reports.push_back(r.report);
        if (r.ir >= 0.0) {
            ir_sum += r.ir;
            ++ir_n;
        }
    }
    if (reports.empty()) {
        std::cerr << "bench: no pairs with usable ground truth (" << io_errors << " I/O errors, "
                  << outside << " outside distance bins)\n";
        return kExitIo;
    }
    BenchmarkSummary summary =
        registration_recall(reports, config.rre_thresh, config.rte_thresh, bins);
    summary.teacher_ir = ir_n > 0 ? ir_sum / static_cast<double>(ir_n) : 0.0;

    try {
        std::ofstream out((fs::path(out_dir) / "summary.csv").string(), std::ios::trunc);
        if (!out) throw IoError("cannot write summary in " + out_dir);
        out << summary_to_csv(summary);
    } catch (const IoError& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return kExitIo;
    }
    if (outside > 0) {
        std::cerr << "bench: " << outside << " pairs outside the distance bins were excluded\n";
    }
    return kExitOk;
}

}  // namespace pcreg::cli
