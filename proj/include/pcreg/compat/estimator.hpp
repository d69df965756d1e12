#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

struct EstimatorVerdict {
    std::vector<std::uint8_t> inlier_flags;  // one per input correspondence
    RigidTransform pose;
    double score = 0.0;  // inlier count of the winning hypothesis

    std::size_t inlier_count() const {
        std::size_t n = 0;
        for (auto f : inlier_flags) n += f ? 1 : 0;
        return n;
    }
};

struct EstimatorParams {
    double tau_c = 0.6;          // residual / compatibility threshold (m)
    std::size_t n_seeds = 20;    // consensus seeds (capped at N)
    std::size_t ransac_iters = 8192;
    std::uint64_t rng_seed = 0;  // used by sampling estimators only
};

// Raised when every hypothesis was degenerate; carries the best partial
// verdict assembled before the failure.
class EstimatorFailedError : public std::runtime_error {
public:
    EstimatorFailedError(const std::string& msg, EstimatorVerdict partial)
        : std::runtime_error(msg), best_partial(std::move(partial)) {}
    EstimatorVerdict best_partial;
};

// Robust correspondence filter slot: implementations score hypotheses,
// return a pose and per-correspondence inlier flags. The flags define the
// inlier/outlier partition used by pseudo-label mining.
class PoseEstimator {
public:
    virtual ~PoseEstimator() = default;
    virtual EstimatorVerdict filter(const PointCloud& p, const PointCloud& q,
                                    const CorrespondenceSet& corrs,
                                    const EstimatorParams& params) const = 0;
    virtual std::string_view name() const = 0;
};

// Second-order compatibility consensus (seed rows with the highest
// second-order mass, consensus by per-seed threshold, Kabsch + residual
// count). Deterministic.
class SecondOrderConsensus final : public PoseEstimator {
public:
    EstimatorVerdict filter(const PointCloud& p, const PointCloud& q,
                            const CorrespondenceSet& corrs,
                            const EstimatorParams& params) const override;
    std::string_view name() const override { return "soc"; }
};

// Classic minimal-sample RANSAC baseline with a final refit, deterministic
// for a fixed params.rng_seed.
class RansacEstimator final : public PoseEstimator {
public:
    EstimatorVerdict filter(const PointCloud& p, const PointCloud& q,
                            const CorrespondenceSet& corrs,
                            const EstimatorParams& params) const override;
    std::string_view name() const override { return "ransac"; }
};

std::unique_ptr<PoseEstimator> make_estimator(std::string_view name);

// Free-function form of the second-order consensus filter.
EstimatorVerdict sc2_filter(const PointCloud& p, const PointCloud& q,
                            const CorrespondenceSet& corrs, double tau_c, std::size_t n_seeds);

}  // namespace pcreg
