#include "pcreg/geometry/rigid_transform.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "pcreg/kern/kernels.hpp"

namespace pcreg {

bool RigidTransform::is_valid(double tol) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if (((gram - Eigen::Matrix3d::Identity()).array().abs() > tol).any()) return false;
    return std::fabs(rotation.determinant() - 1.0) <= tol;
}

void RigidTransform::require_valid() const {
    if (!is_valid()) {
        throw std::invalid_argument(
            "RigidTransform: rotation violates SO(3) invariants (orthogonality/determinant)");
    }
}

RigidTransform compose(const RigidTransform& first, const RigidTransform& second) {
    first.require_valid();
    second.require_valid();
    RigidTransform out;
    out.rotation = second.rotation * first.rotation;
    out.translation = second.rotation * first.translation + second.translation;
    return out;
}

RigidTransform inverse(const RigidTransform& t) {
    t.require_valid();
    RigidTransform out;
    out.rotation = t.rotation.transpose();
    out.translation = -(t.rotation.transpose() * t.translation);
    return out;
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t) {
    cloud.validate();
    t.require_valid();
    PointCloud out;
    const std::size_t n = cloud.size();
    out.x.resize(n);
    out.y.resize(n);
    out.z.resize(n);
    out.attr = cloud.attr;
    if (n == 0) return out;

    double r[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i * 3 + j] = t.rotation(i, j);
    const double tr[3] = {t.translation.x(), t.translation.y(), t.translation.z()};
    kern::active().transform_soa(r, tr, cloud.x.data(), cloud.y.data(), cloud.z.data(),
                                 out.x.data(), out.y.data(), out.z.data(), n);
    return out;
}

Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d& axis, double angle_rad) {
    const Eigen::Vector3d u = axis.normalized();
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    Eigen::Matrix3d k;
    k << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
    return Eigen::Matrix3d::Identity() * c + k * s + u * u.transpose() * (1.0 - c);
}

}  // namespace pcreg
