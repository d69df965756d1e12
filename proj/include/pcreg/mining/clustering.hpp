#pragma once

#include <vector>

#include "pcreg/compat/estimator.hpp"
#include "pcreg/core/correspondence.hpp"
#include "pcreg/features/matching.hpp"
#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/mining/anchors.hpp"

namespace pcreg {

struct ClusteringConfig {
    std::size_t top_k = 50;
    std::size_t max_iters = 8;
    double seed_similarity_threshold = 0.7;  // in (0, 1)
    std::size_t n_p = 128;                   // contrastive sample count downstream
    std::size_t max_seeds = 600;             // cap on C0 entering the estimator

    void validate() const;
};

// Keeps the max_seeds smallest-feature-distance seeds (ties by (i, j)).
CorrespondenceSet cap_seeds(const CorrespondenceSet& seeds, const FeatureField& f_p,
                            const FeatureField& f_q, std::size_t max_seeds);

// Mutual nearest-neighbor matches whose feature similarity 1 - min(L2, 1)
// exceeds the threshold. Throws EmptySeedError when nothing passes.
CorrespondenceSet seed_proposals(const FeatureField& f_p, const FeatureField& f_q,
                                 double threshold);

// Per-iteration audit trail of the clustering loop.
struct IterationRecord {
    std::vector<Correspondence> admitted;          // top-k additions this iteration
    std::vector<std::uint8_t> admitted_rejected;   // flagged outlier in the same iteration
    std::vector<Correspondence> classified;        // C^i with inlier/outlier labels
    AnchorPair anchors;
    std::size_t n_inliers = 0;
    std::size_t n_outliers = 0;
};

struct ClusteringResult {
    CorrespondenceSet inliers;  // final C (inlier-labeled)
    AnchorPair anchors;
    RigidTransform pose;        // pose of the final estimator pass
    std::vector<IterationRecord> history;
    bool estimator_warning = false;  // estimator failed mid-iteration; last consistent state kept
};

// Iterative expansion of a correspondence seed set: candidates from
// feature-matching the still-unclassified points, admission by anchor
// similarity (top-k among S+ > S-), repartition by the spatial-compatibility
// estimator, anchor update, until the inlier or outlier count stops
// changing or max_iters is reached. The initial partition of c0 comes from
// one estimator pass; a missing class keeps the previous anchors (zero
// vectors at initialization).
ClusteringResult feature_geometry_clustering(const PointCloud& p, const PointCloud& q,
                                             const FeatureField& f_p, const FeatureField& f_q,
                                             const CorrespondenceSet& c0,
                                             const ClusteringConfig& config,
                                             const PoseEstimator& estimator,
                                             const EstimatorParams& params);

// Correspondences admitted by anchor similarity but rejected by the
// spatial-compatibility repartition in the same iteration, deduplicated.
CorrespondenceSet mine_hard_samples(const std::vector<IterationRecord>& history,
                                    std::int64_t n_source, std::int64_t n_target);

}  // namespace pcreg
