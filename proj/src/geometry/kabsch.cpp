#include "pcreg/geometry/kabsch.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <stdexcept>

#include "pcreg/core/errors.hpp"

namespace pcreg {

RigidTransform kabsch(const std::vector<Eigen::Vector3d>& src,
                      const std::vector<Eigen::Vector3d>& dst,
                      const std::vector<double>& weights) {
    const std::size_t n = src.size();
    if (dst.size() != n) throw std::invalid_argument("kabsch: src/dst length mismatch");
    if (n < 3) throw DegenerateGeometryError("kabsch: need at least 3 pairs, got " + std::to_string(n));
    if (!weights.empty() && weights.size() != n) {
        throw std::invalid_argument("kabsch: weights length mismatch");
    }

    double w_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w < 0.0) throw std::invalid_argument("kabsch: negative weight");
        w_sum += w;
    }
    if (w_sum <= 0.0) throw std::invalid_argument("kabsch: weights sum to zero");

    Eigen::Vector3d mu_src = Eigen::Vector3d::Zero(), mu_dst = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        mu_src += w * src[i];
        mu_dst += w * dst[i];
    }
    mu_src /= w_sum;
    mu_dst /= w_sum;

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        cov += w * (src[i] - mu_src) * (dst[i] - mu_dst).transpose();
    }
    cov /= w_sum;

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sigma = svd.singularValues();
    // Rank < 2 leaves the rotation underdetermined (collinear/coincident pairs).
    if (sigma(1) <= 1e-12 * sigma(0) || !(sigma(0) > 0.0)) {
        throw DegenerateGeometryError("kabsch: degenerate correspondence geometry");
    }

    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;

    RigidTransform out;
    out.rotation = svd.matrixV() * d * svd.matrixU().transpose();
    out.translation = mu_dst - out.rotation * mu_src;
    return out;
}

}  // namespace pcreg
