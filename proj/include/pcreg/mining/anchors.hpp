#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pcreg/features/feature_field.hpp"

namespace pcreg {

// Feature-space representatives of the current inlier/outlier partition:
// the arithmetic means of the respective correspondence features.
struct AnchorPair {
    Eigen::VectorXd positive;
    Eigen::VectorXd negative;

    int dim() const { return static_cast<int>(positive.size()); }
};

// Means over rows flagged inlier (positive) and outlier (negative).
// Throws MissingClassError when either class is empty.
AnchorPair compute_anchors(const RowMatrixXd& corr_feats,
                           const std::vector<std::uint8_t>& inlier_flags);

struct SimilarityPair {
    double s_plus = 0.0;
    double s_minus = 0.0;
};

// Counts of zero-norm cosine fallbacks, for diagnostics.
struct SimilarityDiagnostics {
    std::size_t zero_norm_cosine = 0;
};

// S = min(D_E, D_C) against each anchor, with D_E = 1 - min(L2, 1) and
// D_C = (cos + 1)/2; zero-norm vectors get cosine 0.5 and bump the counter.
// Both outputs lie in [0, 1].
SimilarityPair anchor_similarity(const AnchorPair& anchors, const Eigen::VectorXd& corr_feat,
                                 SimilarityDiagnostics* diag = nullptr);

}  // namespace pcreg
