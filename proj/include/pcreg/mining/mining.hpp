#pragma once

#include <string>

#include "pcreg/compat/estimator.hpp"
#include "pcreg/features/projection_head.hpp"
#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"
#include "pcreg/mining/adaption.hpp"
#include "pcreg/mining/clustering.hpp"

namespace pcreg {

// Teacher supervision for one pair: dense correspondences C over the dense
// views, sparse correspondences over the downsampled views, the anchor
// pair, and the pose estimated during mining.
struct PseudoLabel {
    CorrespondenceSet dense;   // inlier-labeled
    CorrespondenceSet sparse;  // indices into the sparse views
    AnchorPair anchors;
    RigidTransform pose;
};

struct MixedViews {
    PointCloud p_dense, q_dense;
    PointCloud p_sparse, q_sparse;
};

// Dense views at base_voxel; sparse views re-downsampled at
// base_voxel * sparse_factor, so |sparse| <= |dense| holds structurally.
MixedViews build_mixed_density_views(const PointCloud& p_raw, const PointCloud& q_raw,
                                     double base_voxel, double sparse_factor);

struct MiningConfig {
    ClusteringConfig clustering;
    AdaptionConfig adaption;
    double nn_radius = 0.6;      // radius for the sparse-view NN pass
    double base_voxel = 0.3;
    double sparse_factor = 2.0;
};

struct MiningOutcome {
    PseudoLabel label;
    CorrespondenceSet seeds_pass1;
    CorrespondenceSet seeds_pass2;
    CorrespondenceSet pass1_inliers;
    bool adapted = false;
    bool estimator_warning = false;
    std::size_t hard_count = 0;
};

// Two-pass mining: pass 1 projects with the given teacher head, seeds,
// clusters and collects hard samples, then self-adapts the head; pass 2
// re-projects with the adapted head, seeds and clusters again, estimates
// the pose by Kabsch over the final inliers and derives the sparse
// correspondences by NN search under that pose. Failures (empty seeds,
// estimator failure in pass 2, degenerate pose) raise MiningFailedError.
MiningOutcome mine_pseudo_labels(const PointCloud& p_dense, const PointCloud& q_dense,
                                 const FeatureField& desc_p, const FeatureField& desc_q,
                                 const ProjectionHead& teacher, const MiningConfig& config,
                                 const PoseEstimator& estimator, const EstimatorParams& params);

// Line-oriented label file with a versioned header (schema documented in
// the README).
void write_label_file(const std::string& path, const std::string& pair_id,
                      const PseudoLabel& label);
struct NamedLabel {
    std::string pair_id;
    PseudoLabel label;
};
NamedLabel read_label_file(const std::string& path);

}  // namespace pcreg
