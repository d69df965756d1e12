#include "pcreg/losses/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <utility>

#include "pcreg/core/errors.hpp"
#include "pcreg/features/matching.hpp"
#include "pcreg/metrics/metrics.hpp"

namespace pcreg {

void TrainConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
    if (lr < 0.0) throw std::invalid_argument("TrainConfig: lr must be >= 0");
    if (lambda_corr < 0.0 || lambda_1 < 0.0) {
        throw std::invalid_argument("TrainConfig: loss weights must be >= 0");
    }
    if (n_p < 1) throw std::invalid_argument("TrainConfig: n_p must be >= 1");
    if (!(temperature > 0.0)) throw std::invalid_argument("TrainConfig: temperature must be positive");
}

namespace {

// dL/d(projected rows) -> head parameter gradients, recomputing the
// pre-normalization activations from the descriptors.
void accumulate_head_gradient(const ProjectionHead& head, const FeatureField& desc,
                              const Eigen::MatrixXd& d_output, Eigen::MatrixXd& d_weight,
                              Eigen::VectorXd& d_bias) {
    for (Eigen::Index r = 0; r < d_output.rows(); ++r) {
        Eigen::VectorXd g = d_output.row(r).transpose();
        if (g.isZero(0.0)) continue;
        const Eigen::VectorXd f = desc.vectors.row(r).transpose();
        Eigen::VectorXd dv;
        if (head.normalize_output) {
            const Eigen::VectorXd v = head.weight * f + head.bias;
            const double n = v.norm();
            if (n > 1e-12) {
                const Eigen::VectorXd y = v / n;
                dv = (g - y * y.dot(g)) / n;
            } else {
                dv = g;
            }
        } else {
            dv = g;
        }
        d_weight += dv * f.transpose();
        d_bias += dv;
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = seed ^ (a * 0x9E3779B97F4A7C15ull) ^ (b * 0xC2B2AE3D27D4EB4Full);
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDull;
    h ^= h >> 33;
    return h;
}

}  // namespace

TrainOutcome train_student_head(const ProjectionHead& init,
                                const std::vector<TrainingPair>& stream,
                                const TrainConfig& config) {
    config.validate();
    if (stream.empty()) throw std::invalid_argument("train_student_head: empty label stream");

    TrainOutcome outcome;
    outcome.head = init;
    double initial_mean = 0.0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        double loss_sum = 0.0, ir_sum = 0.0;
        std::size_t n_pairs = 0, n_ir = 0;

        for (std::size_t pi = 0; pi < stream.size(); ++pi) {
            const TrainingPair& pair = stream[pi];
            const FeatureField sp_d = project(pair.desc_p_dense, outcome.head);
            const FeatureField sq_d = project(pair.desc_q_dense, outcome.head);
            const CorrespondenceSet matches_d = match_features(sp_d, sq_d, MatchMode::Mutual);

            // Benchmark IR over seed-quality matches (mutual matches whose
            // feature similarity clears the pipeline's seed threshold);
            // raw mutual matches are too noisy to track feature progress.
            CorrespondenceSet strong;
            strong.n_source = matches_d.n_source;
            strong.n_target = matches_d.n_target;
            for (const auto& c : matches_d.pairs) {
                const double l2 = std::sqrt(feature_sq_dist(sp_d, sq_d, c.i, c.j));
                if (1.0 - std::min(l2, 1.0) > 0.7) strong.pairs.push_back(c);
            }
            if (pair.has_gt && !strong.empty()) {
                ir_sum += inlier_ratio(strong, pair.p_dense, pair.q_dense, pair.t_gt,
                                       config.ir_residual_thresh);
                ++n_ir;
            } else if (!matches_d.empty()) {
                std::size_t agree = 0;
                std::set<std::pair<std::int32_t, std::int32_t>> teacher;
                for (const auto& c : pair.label.dense.pairs) teacher.emplace(c.i, c.j);
                for (const auto& c : matches_d.pairs) agree += teacher.count({c.i, c.j});
                ir_sum += static_cast<double>(agree) / static_cast<double>(matches_d.size());
                ++n_ir;
            }

            ContrastTerms dense, sparse;
            try {
                dense.reg = registration_loss(sp_d, sq_d, pair.label.dense, config.margin_pos,
                                              config.margin_neg);
                dense.corr = corr_loss_on_matches(
                    sp_d, sq_d, matches_d, pair.label, config.n_p,
                    mix_seed(config.seed, static_cast<std::uint64_t>(epoch), pi),
                    config.temperature);
            } catch (const RejectedBatchError&) {
                ++outcome.skipped_batches;
                continue;
            } catch (const std::invalid_argument&) {
                ++outcome.skipped_batches;
                continue;
            }

            FeatureField sp_s, sq_s;
            bool with_sparse = !pair.label.sparse.empty() && pair.p_sparse.size() > 0;
            if (with_sparse) {
                sp_s = project(pair.desc_p_sparse, outcome.head);
                sq_s = project(pair.desc_q_sparse, outcome.head);
                try {
                    sparse.reg = registration_loss(sp_s, sq_s, pair.label.sparse,
                                                   config.margin_pos, config.margin_neg);
                    PseudoLabel sparse_view;
                    sparse_view.dense = pair.label.sparse;
                    sparse_view.anchors = pair.label.anchors;
                    sparse_view.pose = pair.label.pose;
                    const CorrespondenceSet matches_s =
                        match_features(sp_s, sq_s, MatchMode::Mutual);
                    sparse.corr = corr_loss_on_matches(
                        sp_s, sq_s, matches_s, sparse_view, config.n_p,
                        mix_seed(config.seed, static_cast<std::uint64_t>(epoch) + 0x10000, pi),
                        config.temperature);
                } catch (const RejectedBatchError&) {
                    sparse = ContrastTerms{};
                    with_sparse = false;
                } catch (const std::invalid_argument&) {
                    sparse = ContrastTerms{};
                    with_sparse = false;
                }
            }

            const LossValue total = total_loss(dense, sparse, config.lambda_corr, config.lambda_1);
            loss_sum += total.value;
            ++n_pairs;

            if (config.lr > 0.0) {
                Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(outcome.head.d_out(), outcome.head.d_in());
                Eigen::VectorXd db = Eigen::VectorXd::Zero(outcome.head.d_out());
                auto add = [&](const char* key, const FeatureField& desc) {
                    const auto it = total.gradients.find(key);
                    if (it == total.gradients.end()) return;
                    accumulate_head_gradient(outcome.head, desc, it->second, dw, db);
                };
                add("dense:feats_p", pair.desc_p_dense);
                add("dense:feats_q", pair.desc_q_dense);
                if (with_sparse) {
                    add("sparse:feats_p", pair.desc_p_sparse);
                    add("sparse:feats_q", pair.desc_q_sparse);
                }
                outcome.head.weight -= config.lr * dw;
                outcome.head.bias -= config.lr * db;
            }
        }

        const auto t1 = std::chrono::steady_clock::now();
        EpochLog row;
        row.epoch = epoch;
        row.mean_loss = n_pairs > 0 ? loss_sum / static_cast<double>(n_pairs) : 0.0;
        row.benchmark_ir = n_ir > 0 ? ir_sum / static_cast<double>(n_ir) : 0.0;
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        outcome.log.push_back(row);

        if (epoch == 0) {
            initial_mean = row.mean_loss;
        } else if (initial_mean > 1e-12 && row.mean_loss > 10.0 * initial_mean) {
            outcome.diverged = true;
            break;
        }
    }
    return outcome;
}

std::string training_log_to_csv(const std::vector<EpochLog>& log) {
    std::string out = "# schema: training_log v1\n";
    out += "epoch,mean_loss,benchmark_ir,wall_ms\n";
    char buf[160];
    for (const auto& row : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.3f\n", row.epoch, row.mean_loss,
                      row.benchmark_ir, row.wall_ms);
        out += buf;
    }
    return out;
}

}  // namespace pcreg
