#pragma once

#include <Eigen/Core>

#include "pcreg/geometry/point_cloud.hpp"

namespace pcreg {

// One point per occupied voxel, placed at the centroid of the voxel's
// members (mean attribute when present). The grid is anchored to the
// lattice multiple of voxel_size at or below the cloud's minimum corner,
// which makes the operation exactly idempotent and monotone across
// divisible voxel sizes. Output ordered by voxel index.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

// Keeps point p iff fract(||p - center|| / period) < duty. Pure predicate;
// the caller supplies the (typically random) center.
PointCloud periodic_sample(const PointCloud& cloud, const Eigen::Vector3d& center,
                           double period, double duty);

}  // namespace pcreg
