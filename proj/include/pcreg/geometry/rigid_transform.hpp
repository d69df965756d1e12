#pragma once

#include <Eigen/Core>

#include "pcreg/geometry/point_cloud.hpp"

namespace pcreg {

// Rigid motion T = {R, t}, R in SO(3). Validity means R'R = I and
// det(R) = +1, both within 1e-9 elementwise.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidTransform identity() { return {}; }

    Eigen::Vector3d operator()(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }

    bool is_valid(double tol = 1e-9) const;
    // Throws std::invalid_argument when invalid.
    void require_valid() const;
};

// Applying the result equals applying `first` then `second`.
RigidTransform compose(const RigidTransform& first, const RigidTransform& second);

// R' = R^T, t' = -R^T t.
RigidTransform inverse(const RigidTransform& t);

// Output point i = R p_i + t; attribute passed through unchanged.
PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t);

// Rotation by `angle_rad` about unit `axis` (Rodrigues), for tests and
// synthetic pose sampling.
Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d& axis, double angle_rad);

}  // namespace pcreg
