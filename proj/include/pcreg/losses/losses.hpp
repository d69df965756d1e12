#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/features/feature_field.hpp"
#include "pcreg/mining/anchors.hpp"
#include "pcreg/mining/mining.hpp"

namespace pcreg {

// Loss scalar plus analytic gradients, keyed by parameter name. Gradient
// shapes mirror the parameters they differentiate.
struct LossValue {
    double value = 0.0;
    std::map<std::string, Eigen::MatrixXd> gradients;
};

struct ContrastSample {
    Eigen::VectorXd v;
    bool stop_grad = false;     // anchors carry no gradient
    std::int32_t i = -1, j = -1;  // source correspondence, -1 for anchors
};

// Positives/negatives scored against a fixed reference (the positive
// anchor): beta = -||x - reference|| / temperature.
struct ContrastBatch {
    std::vector<ContrastSample> positives;
    std::vector<ContrastSample> negatives;
    Eigen::VectorXd reference;
    double temperature = 0.07;

    void validate() const;  // >=1 of each class, temperature > 0
};

// InfoNCE over the batch, log-sum-exp stabilized by max subtraction.
// Gradients under "positives" / "negatives" (row per sample); stop-grad
// rows are exactly zero.
LossValue info_nce(const ContrastBatch& batch);

// C*_+ = C_+ u {A+}, C*_- = C_- u {A-}; the appended anchors are marked
// stop-grad so no gradient ever reaches the teacher.
std::pair<std::vector<ContrastSample>, std::vector<ContrastSample>> anchor_augment(
    const std::vector<ContrastSample>& c_plus, const std::vector<ContrastSample>& c_minus,
    const AnchorPair& anchors);

// Classifies the student's mutual matches against the teacher label
// (positive iff the exact (i, j) pair appears in label.dense), augments
// with the teacher anchors, samples n_p positives and n_p negatives
// (without replacement, capped at the population) and evaluates info_nce.
// Gradients under "feats_p" / "feats_q" (full field shapes). Throws
// RejectedBatchError when the student produced no matches at all.
LossValue corr_loss(const FeatureField& student_p, const FeatureField& student_q,
                    const PseudoLabel& label, std::size_t n_p, std::uint64_t rng_seed,
                    double temperature = 0.07);

// Variant over precomputed student matches (the trainer reuses its own).
LossValue corr_loss_on_matches(const FeatureField& student_p, const FeatureField& student_q,
                               const CorrespondenceSet& student_matches, const PseudoLabel& label,
                               std::size_t n_p, std::uint64_t rng_seed, double temperature);

// Hardest-contrastive registration loss: matched features pulled within
// margin_pos, each endpoint's hardest non-match pushed beyond margin_neg.
// A single-correspondence batch has no negative term.
LossValue registration_loss(const FeatureField& student_p, const FeatureField& student_q,
                            const CorrespondenceSet& dense_corrs, double margin_pos,
                            double margin_neg);

struct ContrastTerms {
    LossValue reg;
    LossValue corr;
};

// L = (reg_d + lambda_corr corr_d) + lambda_1 (reg_s + lambda_corr corr_s).
// Gradients aggregated linearly under "dense:<key>" / "sparse:<key>".
LossValue total_loss(const ContrastTerms& dense, const ContrastTerms& sparse, double lambda_corr,
                     double lambda_1);

}  // namespace pcreg
