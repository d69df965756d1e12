#pragma once

#include <Eigen/Core>
#include <vector>

#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

// Weighted least-squares rigid alignment of src onto dst (SVD of the
// weighted cross-covariance, reflection corrected so det(R) = +1).
// Requires >= 3 pairs spanning at least a plane; collinear or coincident
// configurations raise DegenerateGeometryError. Empty `weights` means
// uniform; weights must be nonnegative with positive sum.
RigidTransform kabsch(const std::vector<Eigen::Vector3d>& src,
                      const std::vector<Eigen::Vector3d>& dst,
                      const std::vector<double>& weights = {});

}  // namespace pcreg
