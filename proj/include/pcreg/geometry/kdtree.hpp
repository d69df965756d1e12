#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "pcreg/geometry/point_cloud.hpp"

namespace pcreg {

// Exact 3D KD-tree. Nearest queries break distance ties toward the lowest
// point index, independent of traversal order, so results match a
// sequential brute-force scan exactly.
class KdTree3 {
public:
    explicit KdTree3(const PointCloud& cloud);

    struct Hit {
        std::size_t index;
        double sq_dist;
    };

    // Valid only for non-empty clouds.
    Hit nearest(const Eigen::Vector3d& q) const;

    // Indices within `radius` (inclusive), ascending by index.
    std::vector<std::size_t> radius_search(const Eigen::Vector3d& q, double radius) const;

    // k nearest, ordered by (distance, index).
    std::vector<Hit> knn(const Eigen::Vector3d& q, std::size_t k) const;

    std::size_t size() const { return pts_.size() / 3; }

private:
    struct Node {
        int axis = -1;          // -1 marks a leaf
        double split = 0.0;
        std::int32_t left = -1, right = -1;
        std::uint32_t begin = 0, end = 0;  // leaf range into order_
    };

    double coord(std::size_t idx, int axis) const { return pts_[idx * 3 + axis]; }
    double sq_dist(std::size_t idx, const Eigen::Vector3d& q) const;
    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void nearest_rec(std::int32_t node, const Eigen::Vector3d& q, Hit& best) const;
    void radius_rec(std::int32_t node, const Eigen::Vector3d& q, double r_sq,
                    std::vector<std::size_t>& out) const;
    void knn_rec(std::int32_t node, const Eigen::Vector3d& q, std::size_t k,
                 std::vector<Hit>& heap) const;

    std::vector<double> pts_;           // interleaved xyz
    std::vector<std::uint32_t> order_;  // permutation grouped by leaf
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace pcreg
