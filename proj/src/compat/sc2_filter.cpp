#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcreg/compat/compatibility.hpp"
#include "pcreg/compat/estimator.hpp"
#include "pcreg/core/errors.hpp"
#include "pcreg/geometry/kabsch.hpp"

namespace pcreg {

namespace {

// Residuals ||T p_k - q_k|| over the correspondence endpoints.
std::vector<double> residuals(const PointCloud& p, const PointCloud& q,
                              const CorrespondenceSet& corrs, const RigidTransform& t) {
    std::vector<double> out(corrs.size());
    for (std::size_t k = 0; k < corrs.size(); ++k) {
        const auto& c = corrs.pairs[k];
        out[k] = (t(p.point(c.i)) - q.point(c.j)).norm();
    }
    return out;
}

struct Hypothesis {
    std::size_t inliers = 0;
    double mean_residual = std::numeric_limits<double>::infinity();
    std::size_t seed_rank = 0;
    std::vector<std::uint8_t> flags;
    RigidTransform pose;

    bool better_than(const Hypothesis& other) const {
        if (inliers != other.inliers) return inliers > other.inliers;
        if (mean_residual != other.mean_residual) return mean_residual < other.mean_residual;
        return seed_rank < other.seed_rank;
    }
};

}  // namespace

EstimatorVerdict sc2_filter(const PointCloud& p, const PointCloud& q,
                            const CorrespondenceSet& corrs, double tau_c, std::size_t n_seeds) {
    if (corrs.size() < 3) {
        throw std::invalid_argument("sc2_filter: need at least 3 correspondences, got " +
                                    std::to_string(corrs.size()));
    }
    const std::size_t n = corrs.size();
    const CompatibilityMatrix m2 = second_order_compat(first_order_compat(p, q, corrs, tau_c));

    // Seeds: rows with the largest second-order mass; ties to the lower index.
    std::vector<double> row_sum(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) row_sum[a] = m2.values.row(static_cast<Eigen::Index>(a)).sum();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row_sum[a] != row_sum[b]) return row_sum[a] > row_sum[b];
        return a < b;
    });
    const std::size_t k_seeds = std::min(n_seeds, n);
    std::vector<std::size_t> seeds(order.begin(), order.begin() + k_seeds);

    Hypothesis best;
    bool any_valid = false;
    for (std::size_t rank = 0; rank < seeds.size(); ++rank) {
        const std::size_t s = seeds[rank];
        // Consensus: correspondences whose second-order compatibility with
        // the seed reaches the seed-set mean of that row. Inclusive, so a
        // uniformly compatible set (every entry equal) keeps everyone.
        double mean = 0.0;
        for (std::size_t k : seeds) mean += m2.values(s, k);
        mean /= static_cast<double>(seeds.size());

        std::vector<Eigen::Vector3d> src, dst;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == s || m2.values(s, b) >= mean) {
                src.push_back(p.point(corrs.pairs[b].i));
                dst.push_back(q.point(corrs.pairs[b].j));
            }
        }
        if (src.size() < 3) continue;

        RigidTransform pose;
        try {
            pose = kabsch(src, dst);
        } catch (const DegenerateGeometryError&) {
            continue;
        }

        Hypothesis h;
        h.seed_rank = rank;
        h.pose = pose;
        h.flags.assign(n, 0);
        const auto res = residuals(p, q, corrs, pose);
        double res_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (res[k] < tau_c) {
                h.flags[k] = 1;
                ++h.inliers;
                res_sum += res[k];
            }
        }
        h.mean_residual = h.inliers > 0 ? res_sum / static_cast<double>(h.inliers)
                                        : std::numeric_limits<double>::infinity();
        if (!any_valid || h.better_than(best)) {
            best = std::move(h);
            any_valid = true;
        }
    }

    if (!any_valid) {
        EstimatorVerdict partial;
        partial.inlier_flags.assign(n, 0);
        throw EstimatorFailedError("sc2_filter: all hypotheses degenerate", std::move(partial));
    }

    EstimatorVerdict verdict;
    verdict.inlier_flags = std::move(best.flags);
    verdict.pose = best.pose;
    verdict.score = static_cast<double>(best.inliers);
    return verdict;
}

EstimatorVerdict SecondOrderConsensus::filter(const PointCloud& p, const PointCloud& q,
                                              const CorrespondenceSet& corrs,
                                              const EstimatorParams& params) const {
    return sc2_filter(p, q, corrs, params.tau_c, params.n_seeds);
}

}  // namespace pcreg
