#pragma once

#include "pcreg/core/correspondence.hpp"
#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

// For each p in P, pairs p with its nearest q under ||T p - q|| when that
// distance is strictly below `radius`. Unique in p; labeled inlier (each
// pair passed the radius gate). Empty inputs give an empty set.
CorrespondenceSet nn_correspondences_under_transform(const PointCloud& p,
                                                     const PointCloud& q,
                                                     const RigidTransform& t,
                                                     double radius);

}  // namespace pcreg
