#include "pcreg/geometry/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pcreg/core/errors.hpp"
#include "pcreg/geometry/kdtree.hpp"

namespace pcreg {

void SyntheticPairSpec::validate() const {
    if (!(overlap_target > 0.0) || overlap_target > 1.0) {
        throw std::invalid_argument("SyntheticPairSpec: overlap_target must be in (0, 1]");
    }
    if (!(periodic_duty > 0.0) || periodic_duty > 1.0) {
        throw std::invalid_argument("SyntheticPairSpec: periodic_duty must be in (0, 1]");
    }
    if (!(periodic_period > 0.0)) {
        throw std::invalid_argument("SyntheticPairSpec: periodic_period must be positive");
    }
    if (noise_sigma < 0.0 || max_rotation_deg < 0.0 || max_translation_m < 0.0) {
        throw std::invalid_argument("SyntheticPairSpec: magnitudes must be nonnegative");
    }
}

double measure_overlap(const PointCloud& p, const PointCloud& q, const RigidTransform& t,
                       double radius) {
    if (p.empty() || q.empty()) return 0.0;
    const PointCloud aligned = apply_transform(p, t);
    const KdTree3 tree(q);
    const double r_sq = radius * radius;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        if (tree.nearest(aligned.point(i)).sq_dist <= r_sq) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(p.size());
}

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {gauss(rng), gauss(rng), gauss(rng)};
    } while (v.norm() < 1e-9);
    return v.normalized();
}

struct CropPlan {
    // HalfSpace: projections on a random direction; crop by quantile half-width.
    std::vector<double> proj;
    std::vector<double> sorted_proj;
    // Spherical: distance of each point to the two moving sphere centers.
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    Eigen::Vector3d dir = Eigen::Vector3d::UnitX();
    double crop_radius = 0.0;
};

double quantile(const std::vector<double>& sorted, double f) {
    const std::size_t n = sorted.size();
    const double pos = f * static_cast<double>(n - 1);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(n - 1)));
    return sorted[idx];
}

// u in (0, 1], larger u -> larger overlap. Fills keep masks for P and Q.
void crop_masks(const PointCloud& scan, const SyntheticPairSpec& spec, const CropPlan& plan,
                double u, std::vector<char>& keep_p, std::vector<char>& keep_q) {
    const std::size_t n = scan.size();
    keep_p.assign(n, 0);
    keep_q.assign(n, 0);
    if (spec.crop_mode == CropMode::HalfSpace) {
        const double h = 0.5 * u;
        const double hi = quantile(plan.sorted_proj, std::min(1.0, 0.5 + h));
        const double lo = quantile(plan.sorted_proj, std::max(0.0, 0.5 - h));
        for (std::size_t i = 0; i < n; ++i) {
            keep_p[i] = plan.proj[i] <= hi ? 1 : 0;
            keep_q[i] = plan.proj[i] >= lo ? 1 : 0;
        }
    } else {
        const double d = (1.0 - u) * 2.0 * plan.crop_radius;
        const Eigen::Vector3d c_p = plan.centroid - 0.5 * d * plan.dir;
        const Eigen::Vector3d c_q = plan.centroid + 0.5 * d * plan.dir;
        const double r_sq = plan.crop_radius * plan.crop_radius;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector3d pt = scan.point(i);
            keep_p[i] = (pt - c_p).squaredNorm() <= r_sq ? 1 : 0;
            keep_q[i] = (pt - c_q).squaredNorm() <= r_sq ? 1 : 0;
        }
    }
}

PointCloud build_fragment(const PointCloud& scan, const std::vector<char>& keep,
                          const Eigen::Vector3d& periodic_center, const SyntheticPairSpec& spec,
                          const std::vector<Eigen::Vector3d>& noise) {
    PointCloud out;
    const bool with_attr = scan.has_attr();
    for (std::size_t i = 0; i < scan.size(); ++i) {
        if (!keep[i]) continue;
        const Eigen::Vector3d pt = scan.point(i);
        const double r = (pt - periodic_center).norm() / spec.periodic_period;
        if (r - std::floor(r) >= spec.periodic_duty) continue;
        const Eigen::Vector3d noisy = pt + noise[i];
        if (with_attr)
            out.add(noisy, scan.attr[i]);
        else
            out.add(noisy);
    }
    return out;
}

}  // namespace

SyntheticPair make_synthetic_pair(const PointCloud& scan, const SyntheticPairSpec& spec,
                                  std::uint64_t seed) {
    spec.validate();
    scan.validate();
    if (scan.empty()) throw std::invalid_argument("make_synthetic_pair: empty scan");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::size_t n = scan.size();
    Eigen::Vector3d bb_min = scan.point(0), bb_max = scan.point(0);
    for (std::size_t i = 1; i < n; ++i) {
        bb_min = bb_min.cwiseMin(scan.point(i));
        bb_max = bb_max.cwiseMax(scan.point(i));
    }

    constexpr int kMaxAttempts = 20;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        CropPlan plan;
        plan.dir = random_unit(rng);
        if (spec.crop_mode == CropMode::HalfSpace) {
            plan.proj.resize(n);
            for (std::size_t i = 0; i < n; ++i) plan.proj[i] = scan.point(i).dot(plan.dir);
            plan.sorted_proj = plan.proj;
            std::sort(plan.sorted_proj.begin(), plan.sorted_proj.end());
        } else {
            for (std::size_t i = 0; i < n; ++i) plan.centroid += scan.point(i);
            plan.centroid /= static_cast<double>(n);
            std::vector<double> dist(n);
            for (std::size_t i = 0; i < n; ++i) dist[i] = (scan.point(i) - plan.centroid).norm();
            std::sort(dist.begin(), dist.end());
            plan.crop_radius = 0.75 * quantile(dist, 0.9);
            if (!(plan.crop_radius > 0.0)) plan.crop_radius = 1.0;
        }

        auto box_point = [&] {
            return Eigen::Vector3d(bb_min.x() + unit(rng) * (bb_max.x() - bb_min.x()),
                                   bb_min.y() + unit(rng) * (bb_max.y() - bb_min.y()),
                                   bb_min.z() + unit(rng) * (bb_max.z() - bb_min.z()));
        };
        const Eigen::Vector3d center_p = box_point();
        const Eigen::Vector3d center_q = box_point();

        RigidTransform t_gt;
        {
            const Eigen::Vector3d axis = random_unit(rng);
            const double angle = unit(rng) * spec.max_rotation_deg * M_PI / 180.0;
            t_gt.rotation = axis_angle_rotation(axis, angle);
            const Eigen::Vector3d dir = random_unit(rng);
            t_gt.translation = dir * (unit(rng) * spec.max_translation_m);
        }

        std::vector<Eigen::Vector3d> noise_p(n, Eigen::Vector3d::Zero());
        std::vector<Eigen::Vector3d> noise_q(n, Eigen::Vector3d::Zero());
        if (spec.noise_sigma > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                noise_p[i] = spec.noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
                noise_q[i] = spec.noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
            }
        }

        std::vector<char> keep_p, keep_q;
        auto overlap_at = [&](double u, PointCloud* frag_p, PointCloud* frag_q) {
            crop_masks(scan, spec, plan, u, keep_p, keep_q);
            PointCloud fp = build_fragment(scan, keep_p, center_p, spec, noise_p);
            PointCloud fq = build_fragment(scan, keep_q, center_q, spec, noise_q);
            const double ov =
                (fp.empty() || fq.empty()) ? 0.0 : measure_overlap(fp, fq, RigidTransform::identity());
            if (frag_p) *frag_p = std::move(fp);
            if (frag_q) *frag_q = std::move(fq);
            return ov;
        };

        // Overlap grows with u; bisect to the target, then verify tolerance.
        double lo = 1e-3, hi = 1.0;
        double u = 1.0;
        double ov = overlap_at(u, nullptr, nullptr);
        if (ov > spec.overlap_target + 0.05) {
            for (int it = 0; it < 18; ++it) {
                u = 0.5 * (lo + hi);
                ov = overlap_at(u, nullptr, nullptr);
                if (std::fabs(ov - spec.overlap_target) <= 0.05) break;
                if (ov > spec.overlap_target)
                    hi = u;
                else
                    lo = u;
            }
        }

        SyntheticPair pair;
        PointCloud frag_q_scan_frame;
        pair.measured_overlap = overlap_at(u, &pair.p, &frag_q_scan_frame);
        if (pair.p.size() >= 3 && frag_q_scan_frame.size() >= 3 &&
            std::fabs(pair.measured_overlap - spec.overlap_target) <= 0.1) {
            pair.q = apply_transform(frag_q_scan_frame, t_gt);
            pair.t_gt = t_gt;
            return pair;
        }
    }
    throw GenerationFailedError("make_synthetic_pair: overlap target " +
                                std::to_string(spec.overlap_target) +
                                " unattainable after bounded retries");
}

}  // namespace pcreg
