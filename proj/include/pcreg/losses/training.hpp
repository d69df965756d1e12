#pragma once

#include <string>
#include <vector>

#include "pcreg/losses/losses.hpp"
#include "pcreg/mining/mining.hpp"

namespace pcreg {

// One pseudo-labelled pair prepared for student training: dense and sparse
// views with their base descriptors, the teacher label, and the ground
// truth when the corpus carries it (benchmark IR falls back to
// teacher-agreement without it).
struct TrainingPair {
    std::string pair_id;
    PointCloud p_dense, q_dense, p_sparse, q_sparse;
    FeatureField desc_p_dense, desc_q_dense, desc_p_sparse, desc_q_sparse;
    PseudoLabel label;
    bool has_gt = false;
    RigidTransform t_gt;
};

struct TrainConfig {
    int epochs = 10;
    double lr = 1e-3;
    double lambda_corr = 1.0;
    double lambda_1 = 0.5;
    double margin_pos = 0.1;
    double margin_neg = 1.4;
    std::size_t n_p = 128;
    double temperature = 0.07;
    double ir_residual_thresh = 0.6;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochLog {
    int epoch = 0;
    double mean_loss = 0.0;
    double benchmark_ir = 0.0;
    double wall_ms = 0.0;
};

struct TrainOutcome {
    ProjectionHead head;
    std::vector<EpochLog> log;
    std::size_t skipped_batches = 0;
    bool diverged = false;  // mean loss exceeded 10x its initial value
};

// Plain gradient descent over the label stream: per pair, the student head
// projects the dense and sparse descriptors, the combined loss (dense +
// lambda_1 * sparse, each reg + lambda_corr * corr) backpropagates through
// the linear head, and the head takes one step. Deterministic given seeds.
TrainOutcome train_student_head(const ProjectionHead& init,
                                const std::vector<TrainingPair>& stream,
                                const TrainConfig& config);

// Training-log CSV: schema header, then epoch rows.
std::string training_log_to_csv(const std::vector<EpochLog>& log);

}  // namespace pcreg
