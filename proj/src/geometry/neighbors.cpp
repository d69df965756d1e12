#include "pcreg/geometry/neighbors.hpp"

#include <cmath>
#include <stdexcept>

#include "pcreg/geometry/kdtree.hpp"

namespace pcreg {

CorrespondenceSet nn_correspondences_under_transform(const PointCloud& p,
                                                     const PointCloud& q,
                                                     const RigidTransform& t,
                                                     double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("nn_correspondences: radius must be positive");
    t.require_valid();
    CorrespondenceSet out;
    out.n_source = static_cast<std::int64_t>(p.size());
    out.n_target = static_cast<std::int64_t>(q.size());
    if (p.empty() || q.empty()) return out;

    const PointCloud moved = apply_transform(p, t);
    const KdTree3 tree(q);
    const double r_sq = radius * radius;
    for (std::size_t i = 0; i < moved.size(); ++i) {
        const auto hit = tree.nearest(moved.point(i));
        if (hit.sq_dist < r_sq) {
            out.pairs.push_back({static_cast<std::int32_t>(i),
                                 static_cast<std::int32_t>(hit.index), CorrLabel::Inlier});
        }
    }
    return out;
}

}  // namespace pcreg
