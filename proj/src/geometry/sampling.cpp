#include "pcreg/geometry/sampling.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pcreg {

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
    if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
        throw std::invalid_argument("voxel_downsample: voxel_size must be positive");
    }
    cloud.validate();
    PointCloud out;
    if (cloud.empty()) return out;

    double min_c[3] = {std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        min_c[0] = std::min(min_c[0], cloud.x[i]);
        min_c[1] = std::min(min_c[1], cloud.y[i]);
        min_c[2] = std::min(min_c[2], cloud.z[i]);
    }
    // Lattice-aligned origin: grids for divisible voxel sizes nest, and
    // re-downsampling the output reproduces it exactly.
    double origin[3];
    for (int a = 0; a < 3; ++a) origin[a] = voxel_size * std::floor(min_c[a] / voxel_size);

    struct Acc {
        double sx = 0, sy = 0, sz = 0, sa = 0;
        std::size_t n = 0;
    };
    const bool with_attr = cloud.has_attr();
    std::map<std::array<std::int64_t, 3>, Acc> cells;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::array<std::int64_t, 3> key = {
            static_cast<std::int64_t>(std::floor((cloud.x[i] - origin[0]) / voxel_size)),
            static_cast<std::int64_t>(std::floor((cloud.y[i] - origin[1]) / voxel_size)),
            static_cast<std::int64_t>(std::floor((cloud.z[i] - origin[2]) / voxel_size)),
        };
        Acc& acc = cells[key];
        acc.sx += cloud.x[i];
        acc.sy += cloud.y[i];
        acc.sz += cloud.z[i];
        if (with_attr) acc.sa += cloud.attr[i];
        acc.n += 1;
    }

    out.reserve(cells.size());
    if (with_attr) out.attr.reserve(cells.size());
    for (const auto& [key, acc] : cells) {
        const double inv = 1.0 / static_cast<double>(acc.n);
        out.x.push_back(acc.sx * inv);
        out.y.push_back(acc.sy * inv);
        out.z.push_back(acc.sz * inv);
        if (with_attr) out.attr.push_back(acc.sa * inv);
    }
    return out;
}

PointCloud periodic_sample(const PointCloud& cloud, const Eigen::Vector3d& center,
                           double period, double duty) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("periodic_sample: period must be positive");
    }
    if (!(duty > 0.0) || duty > 1.0) {
        throw std::invalid_argument("periodic_sample: duty must be in (0, 1]");
    }
    cloud.validate();
    PointCloud out;
    const bool with_attr = cloud.has_attr();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = (cloud.point(i) - center).norm() / period;
        const double fract = r - std::floor(r);
        if (fract < duty) {
            if (with_attr)
                out.add(cloud.point(i), cloud.attr[i]);
            else
                out.add(cloud.point(i));
        }
    }
    return out;
}

}  // namespace pcreg
