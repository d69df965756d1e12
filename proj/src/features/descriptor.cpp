#include "pcreg/features/descriptor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "pcreg/geometry/kdtree.hpp"

namespace pcreg {

void DescriptorConfig::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("DescriptorConfig: radius must be positive");
    if (normal_k < 3) throw std::invalid_argument("DescriptorConfig: normal_k must be >= 3");
    if (bins_per_feature < 2) {
        throw std::invalid_argument("DescriptorConfig: bins_per_feature must be >= 2");
    }
}

std::vector<Eigen::Vector3d> estimate_normals(const PointCloud& cloud, int k) {
    const std::size_t n = cloud.size();
    std::vector<Eigen::Vector3d> normals(n, Eigen::Vector3d::UnitZ());
    if (n == 0) return normals;
    const KdTree3 tree(cloud);
    for (std::size_t i = 0; i < n; ++i) {
        const auto nb = tree.knn(cloud.point(i), static_cast<std::size_t>(k) + 1);
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& h : nb) mean += cloud.point(h.index);
        mean /= static_cast<double>(nb.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& h : nb) {
            const Eigen::Vector3d d = cloud.point(h.index) - mean;
            cov += d * d.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        Eigen::Vector3d normal = eig.eigenvectors().col(0);  // smallest eigenvalue
        // Orient toward the sensor origin; exact grazing ties keep the solver's sign.
        if (normal.dot(cloud.point(i)) > 0.0) normal = -normal;
        normals[i] = normal;
    }
    return normals;
}

FeatureField extract_descriptors(const PointCloud& cloud, const DescriptorConfig& config) {
    config.validate();
    cloud.validate();
    if (cloud.empty()) throw std::invalid_argument("extract_descriptors: empty cloud");

    const std::size_t n = cloud.size();
    const int bins = config.bins_per_feature;
    const int dim = config.dim();
    FeatureField field;
    field.vectors = RowMatrixXd::Zero(static_cast<Eigen::Index>(n), dim);
    field.valid.assign(n, 1);

    const auto normals = estimate_normals(cloud, config.normal_k);
    const KdTree3 tree(cloud);

    auto bin_of = [bins](double v, double lo, double hi) {
        int b = static_cast<int>(static_cast<double>(bins) * (v - lo) / (hi - lo));
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        return b;
    };

    // Pass 1: simplified point-feature histogram per point (angle triplets
    // of every radius neighbor, one histogram slot each).
    std::vector<std::vector<std::size_t>> neighborhoods(n);
    RowMatrixXd spfh = RowMatrixXd::Zero(static_cast<Eigen::Index>(n), dim);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d p = cloud.point(i);
        const Eigen::Vector3d u = normals[i];
        const auto nbrs = tree.radius_search(p, config.radius);
        int used = 0;
        Eigen::VectorXd hist = Eigen::VectorXd::Zero(dim);
        for (std::size_t idx : nbrs) {
            if (idx == i) continue;
            const Eigen::Vector3d q = cloud.point(idx);
            Eigen::Vector3d d = q - p;
            const double len = d.norm();
            if (len < 1e-12) continue;
            d /= len;
            Eigen::Vector3d v = d.cross(u);
            const double v_len = v.norm();
            if (v_len < 1e-9) continue;  // neighbor along the normal axis
            v /= v_len;
            const Eigen::Vector3d w = u.cross(v);
            const Eigen::Vector3d nq = normals[idx];
            const double alpha = v.dot(nq);                    // [-1, 1]
            const double phi = u.dot(d);                       // [-1, 1]
            const double theta = std::atan2(w.dot(nq), u.dot(nq));  // [-pi, pi]
            hist[bin_of(alpha, -1.0, 1.0)] += 1.0;
            hist[bins + bin_of(phi, -1.0, 1.0)] += 1.0;
            hist[2 * bins + bin_of(theta, -M_PI, M_PI)] += 1.0;
            neighborhoods[i].push_back(idx);
            ++used;
        }
        if (used < 3) {
            field.valid[i] = 0;
            continue;
        }
        spfh.row(static_cast<Eigen::Index>(i)) = hist.transpose() / hist.sum();
    }

    // Pass 2: distance-weighted aggregation over the neighborhood smooths
    // out resampling noise from the voxel grid.
    for (std::size_t i = 0; i < n; ++i) {
        if (!field.valid[i]) continue;
        Eigen::VectorXd acc = spfh.row(static_cast<Eigen::Index>(i)).transpose();
        double w_sum = 0.0;
        Eigen::VectorXd nb_acc = Eigen::VectorXd::Zero(dim);
        for (std::size_t idx : neighborhoods[i]) {
            if (!field.valid[idx]) continue;
            const double dist = (cloud.point(idx) - cloud.point(i)).norm();
            const double w = 1.0 / std::max(dist, 0.05 * config.radius);
            nb_acc += w * spfh.row(static_cast<Eigen::Index>(idx)).transpose();
            w_sum += w;
        }
        if (w_sum > 0.0) acc += nb_acc / w_sum;
        const double norm = acc.norm();
        if (norm > 1e-12) acc /= norm;
        field.vectors.row(static_cast<Eigen::Index>(i)) = acc.transpose();
    }
    return field;
}

}  // namespace pcreg
