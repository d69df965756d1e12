#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "pcreg/compat/estimator.hpp"
#include "pcreg/core/errors.hpp"
#include "pcreg/geometry/kabsch.hpp"

namespace pcreg {

// Minimal-sample RANSAC with rigidity pre-rejection: a sample is discarded
// unless all three pairwise source/target distances agree within tau_c,
// which is what survival of a rigid motion requires. Pre-rejection keeps
// random sampling viable at low inlier ratios; the iteration budget adapts
// to the best consensus found and params.ransac_iters caps it.
EstimatorVerdict RansacEstimator::filter(const PointCloud& p, const PointCloud& q,
                                         const CorrespondenceSet& corrs,
                                         const EstimatorParams& params) const {
    if (corrs.size() < 3) {
        throw std::invalid_argument("ransac: need at least 3 correspondences, got " +
                                    std::to_string(corrs.size()));
    }
    const std::size_t n = corrs.size();
    std::mt19937_64 rng(params.rng_seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    auto residual = [&](const RigidTransform& t, std::size_t k) {
        const auto& c = corrs.pairs[k];
        return (t(p.point(c.i)) - q.point(c.j)).norm();
    };
    auto pair_compatible = [&](std::size_t a, std::size_t b) {
        const auto& ca = corrs.pairs[a];
        const auto& cb = corrs.pairs[b];
        const double dp = (p.point(ca.i) - p.point(cb.i)).norm();
        const double dq = (q.point(ca.j) - q.point(cb.j)).norm();
        return std::fabs(dp - dq) < params.tau_c;
    };

    // Compatible-candidate lists, built lazily per first sample point.
    std::unordered_map<std::size_t, std::vector<std::size_t>> compat_cache;
    auto compatible_with = [&](std::size_t a) -> const std::vector<std::size_t>& {
        auto it = compat_cache.find(a);
        if (it != compat_cache.end()) return it->second;
        std::vector<std::size_t> list;
        for (std::size_t b = 0; b < n; ++b) {
            if (b != a && pair_compatible(a, b)) list.push_back(b);
        }
        return compat_cache.emplace(a, std::move(list)).first->second;
    };

    std::size_t best_inliers = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> best_flags;
    RigidTransform best_pose;
    bool any_valid = false;

    const double confidence = 0.99;
    std::size_t needed = params.ransac_iters;
    for (std::size_t it = 0; it < params.ransac_iters && it < needed; ++it) {
        const std::size_t a = pick(rng);
        const auto& cands = compatible_with(a);
        if (cands.size() < 2) continue;
        std::uniform_int_distribution<std::size_t> pick_cand(0, cands.size() - 1);
        const std::size_t b = cands[pick_cand(rng)];
        const std::size_t c = cands[pick_cand(rng)];
        if (b == c || !pair_compatible(b, c)) continue;

        std::vector<Eigen::Vector3d> src = {p.point(corrs.pairs[a].i), p.point(corrs.pairs[b].i),
                                            p.point(corrs.pairs[c].i)};
        std::vector<Eigen::Vector3d> dst = {q.point(corrs.pairs[a].j), q.point(corrs.pairs[b].j),
                                            q.point(corrs.pairs[c].j)};
        RigidTransform pose;
        try {
            pose = kabsch(src, dst);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        std::vector<std::uint8_t> flags(n, 0);
        std::size_t inliers = 0;
        double res_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = residual(pose, k);
            if (r < params.tau_c) {
                flags[k] = 1;
                ++inliers;
                res_sum += r;
            }
        }
        const double mean = inliers > 0 ? res_sum / static_cast<double>(inliers)
                                        : std::numeric_limits<double>::infinity();
        if (!any_valid || inliers > best_inliers ||
            (inliers == best_inliers && mean < best_mean)) {
            best_inliers = inliers;
            best_mean = mean;
            best_flags = std::move(flags);
            best_pose = pose;
            any_valid = true;

            // classic adaptive bound from the plain sampling model
            const double eps = static_cast<double>(best_inliers) / static_cast<double>(n);
            const double p_good = eps * eps * eps;
            if (p_good > 1e-12 && p_good < 1.0) {
                needed = static_cast<std::size_t>(
                    std::ceil(std::log(1.0 - confidence) / std::log(1.0 - p_good)));
            } else if (p_good >= 1.0) {
                needed = it + 1;
            }
        }
    }

    if (!any_valid) {
        EstimatorVerdict partial;
        partial.inlier_flags.assign(n, 0);
        throw EstimatorFailedError("ransac: all minimal samples degenerate", std::move(partial));
    }

    // Refit on the winning consensus and recount.
    if (best_inliers >= 3) {
        std::vector<Eigen::Vector3d> src, dst;
        for (std::size_t k = 0; k < n; ++k) {
            if (best_flags[k]) {
                src.push_back(p.point(corrs.pairs[k].i));
                dst.push_back(q.point(corrs.pairs[k].j));
            }
        }
        try {
            const RigidTransform refined = kabsch(src, dst);
            std::vector<std::uint8_t> flags(n, 0);
            std::size_t inliers = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (residual(refined, k) < params.tau_c) {
                    flags[k] = 1;
                    ++inliers;
                }
            }
            if (inliers >= best_inliers) {
                best_flags = std::move(flags);
                best_pose = refined;
                best_inliers = inliers;
            }
        } catch (const DegenerateGeometryError&) {
            // keep the minimal-sample hypothesis
        }
    }

    EstimatorVerdict verdict;
    verdict.inlier_flags = std::move(best_flags);
    verdict.pose = best_pose;
    verdict.score = static_cast<double>(best_inliers);
    return verdict;
}

std::unique_ptr<PoseEstimator> make_estimator(std::string_view name) {
    if (name == "soc" || name == "sc2") return std::make_unique<SecondOrderConsensus>();
    if (name == "ransac") return std::make_unique<RansacEstimator>();
    throw std::invalid_argument("unknown estimator: " + std::string(name));
}

}  // namespace pcreg
