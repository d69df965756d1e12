#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace pcreg {

// Ordered 3D point set, structure-of-arrays so the transform/compat kernels
// can stream coordinates directly. `attr` is the optional per-point scalar
// (LiDAR intensity); empty means absent.
class PointCloud {
public:
    std::vector<double> x, y, z;
    std::vector<double> attr;

    PointCloud() = default;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }
    bool has_attr() const { return !attr.empty(); }

    Eigen::Vector3d point(std::size_t i) const { return {x[i], y[i], z[i]}; }

    void add(const Eigen::Vector3d& p) {
        x.push_back(p.x());
        y.push_back(p.y());
        z.push_back(p.z());
    }
    void add(const Eigen::Vector3d& p, double a) {
        add(p);
        attr.push_back(a);
    }

    void reserve(std::size_t n) {
        x.reserve(n);
        y.reserve(n);
        z.reserve(n);
    }

    // Throws std::invalid_argument on non-finite coordinates or
    // mismatched attribute length.
    void validate() const;
};

}  // namespace pcreg
