#pragma once

#include <string>
#include <vector>

#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

// KITTI-style binary scan: little-endian float32 records of
// (x, y, z, intensity); file length must be a multiple of 16 bytes.
// Intensity is stored as the cloud attribute.
PointCloud read_kitti_bin(const std::string& path);
void write_kitti_bin(const std::string& path, const PointCloud& cloud);

// ASCII PLY, vertex x y z only (small test fixtures).
PointCloud read_ply(const std::string& path);
void write_ply(const std::string& path, const PointCloud& cloud);

// One transform per line: 12 whitespace-separated numbers, row-major [R | t].
std::vector<RigidTransform> read_pose_file(const std::string& path);
void write_pose_file(const std::string& path, const std::vector<RigidTransform>& poses);

std::string format_pose_row(const RigidTransform& t);
RigidTransform parse_pose_row(const std::string& line);

}  // namespace pcreg
