#include "pcreg/mining/mining.hpp"

#include <stdexcept>

#include "pcreg/core/errors.hpp"
#include "pcreg/geometry/kabsch.hpp"
#include "pcreg/geometry/neighbors.hpp"
#include "pcreg/geometry/sampling.hpp"

namespace pcreg {

MixedViews build_mixed_density_views(const PointCloud& p_raw, const PointCloud& q_raw,
                                     double base_voxel, double sparse_factor) {
    if (!(base_voxel > 0.0)) {
        throw std::invalid_argument("build_mixed_density_views: base_voxel must be positive");
    }
    if (!(sparse_factor > 1.0)) {
        throw std::invalid_argument("build_mixed_density_views: sparse_factor must exceed 1");
    }
    MixedViews views;
    views.p_dense = voxel_downsample(p_raw, base_voxel);
    views.q_dense = voxel_downsample(q_raw, base_voxel);
    views.p_sparse = voxel_downsample(views.p_dense, base_voxel * sparse_factor);
    views.q_sparse = voxel_downsample(views.q_dense, base_voxel * sparse_factor);
    return views;
}

MiningOutcome mine_pseudo_labels(const PointCloud& p_dense, const PointCloud& q_dense,
                                 const FeatureField& desc_p, const FeatureField& desc_q,
                                 const ProjectionHead& teacher, const MiningConfig& config,
                                 const PoseEstimator& estimator, const EstimatorParams& params) {
    MiningOutcome outcome;
    const double threshold = config.clustering.seed_similarity_threshold;

    // Pass 1: base teacher, collect hard samples, self-adapt.
    const FeatureField fp1 = project(desc_p, teacher);
    const FeatureField fq1 = project(desc_q, teacher);
    ClusteringResult pass1;
    try {
        outcome.seeds_pass1 =
            cap_seeds(seed_proposals(fp1, fq1, threshold), fp1, fq1, config.clustering.max_seeds);
        pass1 = feature_geometry_clustering(p_dense, q_dense, fp1, fq1, outcome.seeds_pass1,
                                            config.clustering, estimator, params);
    } catch (const EmptySeedError& e) {
        throw MiningFailedError(MiningFailureKind::EmptySeeds, std::string("pass 1: ") + e.what());
    } catch (const EstimatorFailedError& e) {
        throw MiningFailedError(MiningFailureKind::EstimatorFailed,
                                std::string("pass 1 estimator: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw MiningFailedError(MiningFailureKind::EmptySeeds, std::string("pass 1: ") + e.what());
    }
    outcome.pass1_inliers = pass1.inliers;
    outcome.estimator_warning = pass1.estimator_warning;

    const CorrespondenceSet hard =
        mine_hard_samples(pass1.history, static_cast<std::int64_t>(p_dense.size()),
                          static_cast<std::int64_t>(q_dense.size()));
    outcome.hard_count = hard.size();

    ProjectionHead adapted = teacher;
    if (!hard.empty() && !pass1.inliers.empty()) {
        const AdaptionResult ar = per_batch_self_adaption(teacher, desc_p, desc_q, pass1.inliers,
                                                          hard, pass1.anchors, config.adaption);
        adapted = ar.head;
        outcome.adapted = ar.adapted;
    }

    // Pass 2: adapted teacher mines the label.
    const FeatureField fp2 = outcome.adapted ? project(desc_p, adapted) : fp1;
    const FeatureField fq2 = outcome.adapted ? project(desc_q, adapted) : fq1;
    ClusteringResult pass2;
    try {
        outcome.seeds_pass2 =
            cap_seeds(seed_proposals(fp2, fq2, threshold), fp2, fq2, config.clustering.max_seeds);
        pass2 = feature_geometry_clustering(p_dense, q_dense, fp2, fq2, outcome.seeds_pass2,
                                            config.clustering, estimator, params);
    } catch (const EmptySeedError& e) {
        throw MiningFailedError(MiningFailureKind::EmptySeeds, std::string("pass 2: ") + e.what());
    } catch (const EstimatorFailedError& e) {
        throw MiningFailedError(MiningFailureKind::EstimatorFailed,
                                std::string("pass 2 estimator: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw MiningFailedError(MiningFailureKind::EmptySeeds, std::string("pass 2: ") + e.what());
    }
    outcome.estimator_warning = outcome.estimator_warning || pass2.estimator_warning;

    if (pass2.inliers.size() < 3) {
        throw MiningFailedError(MiningFailureKind::TooFewInliers,
                                "pass 2 produced fewer than 3 inliers");
    }

    std::vector<Eigen::Vector3d> src, dst;
    src.reserve(pass2.inliers.size());
    dst.reserve(pass2.inliers.size());
    for (const auto& c : pass2.inliers.pairs) {
        src.push_back(p_dense.point(static_cast<std::size_t>(c.i)));
        dst.push_back(q_dense.point(static_cast<std::size_t>(c.j)));
    }
    RigidTransform pose;
    try {
        pose = kabsch(src, dst);
    } catch (const DegenerateGeometryError& e) {
        throw MiningFailedError(MiningFailureKind::DegenerateGeometry,
                                std::string("pose estimation: ") + e.what());
    }

    const PointCloud p_sparse = voxel_downsample(p_dense, config.base_voxel * config.sparse_factor);
    const PointCloud q_sparse = voxel_downsample(q_dense, config.base_voxel * config.sparse_factor);

    outcome.label.dense = pass2.inliers;
    outcome.label.sparse =
        nn_correspondences_under_transform(p_sparse, q_sparse, pose, config.nn_radius);
    outcome.label.anchors = pass2.anchors;
    outcome.label.pose = pose;
    return outcome;
}

}  // namespace pcreg
