#include "pcreg/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pcreg/kern/kernels.hpp"

namespace pcreg {

void DistanceBin::validate() const {
    if (!(d_min >= 0.0) || !(d_min < d_max)) {
        throw std::invalid_argument("DistanceBin: need 0 <= d_min < d_max");
    }
}

std::vector<DistanceBin> default_distance_bins() {
    return {{5, 10}, {10, 20}, {20, 30}, {30, 40}, {40, 50}};
}

double rre(const RigidTransform& t_est, const RigidTransform& t_gt) {
    t_est.require_valid();
    t_gt.require_valid();
    const Eigen::Matrix3d rel = t_est.rotation.transpose() * t_gt.rotation;
    // Geodesic angle acos((trace - 1)/2), evaluated in atan2 form: the
    // arccos loses half the mantissa near 0 and 180 degrees, which would
    // floor exact recoveries at ~1e-6 deg.
    const Eigen::Vector3d axis(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0),
                               rel(1, 0) - rel(0, 1));
    const double sin_part = 0.5 * axis.norm();
    const double cos_part = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
    return std::atan2(sin_part, cos_part) * 180.0 / M_PI;
}

double rte(const RigidTransform& t_est, const RigidTransform& t_gt) {
    return (t_est.translation - t_gt.translation).norm();
}

BenchmarkSummary registration_recall(const std::vector<MetricsReport>& reports,
                                     double rre_thresh_deg, double rte_thresh_m,
                                     const std::vector<DistanceBin>& bins) {
    if (reports.empty()) throw std::invalid_argument("registration_recall: no reports");
    for (const auto& b : bins) b.validate();

    std::map<DistanceBin, std::size_t> total, good;
    for (const auto& b : bins) {
        total[b] = 0;
        good[b] = 0;
    }
    double rre_sum = 0.0, rte_sum = 0.0;
    std::size_t n_success = 0;
    for (const auto& r : reports) {
        if (!total.count(r.bin)) {
            throw std::invalid_argument("registration_recall: report bin not in bin list");
        }
        const bool ok = r.rre_deg <= rre_thresh_deg && r.rte_m <= rte_thresh_m;
        total[r.bin] += 1;
        if (ok) {
            good[r.bin] += 1;
            rre_sum += r.rre_deg;
            rte_sum += r.rte_m;
            ++n_success;
        }
    }

    BenchmarkSummary s;
    double rr_sum = 0.0;
    std::size_t n_bins = 0;
    for (const auto& b : bins) {
        s.pairs_per_bin[b] = total[b];
        if (total[b] == 0) {
            ++s.empty_bins;
            continue;
        }
        const double rr = static_cast<double>(good[b]) / static_cast<double>(total[b]);
        s.rr_per_bin[b] = rr;
        rr_sum += rr;
        ++n_bins;
    }
    s.mrr = n_bins > 0 ? rr_sum / static_cast<double>(n_bins) : 0.0;
    s.mean_rre = n_success > 0 ? rre_sum / static_cast<double>(n_success) : 0.0;
    s.mean_rte = n_success > 0 ? rte_sum / static_cast<double>(n_success) : 0.0;
    return s;
}

double inlier_ratio(const CorrespondenceSet& corrs, const PointCloud& p, const PointCloud& q,
                    const RigidTransform& t_gt, double residual_thresh) {
    if (!(residual_thresh > 0.0)) {
        throw std::invalid_argument("inlier_ratio: residual_thresh must be positive");
    }
    if (corrs.empty()) return 0.0;
    const PointCloud moved = apply_transform(p, t_gt);
    std::size_t inliers = 0;
    const double thresh_sq = residual_thresh * residual_thresh;
    for (const auto& c : corrs.pairs) {
        const double dx = moved.x[c.i] - q.x[c.j];
        const double dy = moved.y[c.i] - q.y[c.j];
        const double dz = moved.z[c.i] - q.z[c.j];
        if (dx * dx + dy * dy + dz * dz < thresh_sq) ++inliers;
    }
    return static_cast<double>(inliers) / static_cast<double>(corrs.size());
}

std::string summary_to_csv(const BenchmarkSummary& summary) {
    std::string out = "# schema: bench_summary v1\n";
    out += "bin_lo,bin_hi,rr,n_pairs\n";
    char buf[256];
    for (const auto& [bin, n] : summary.pairs_per_bin) {
        const auto it = summary.rr_per_bin.find(bin);
        const double rr = it != summary.rr_per_bin.end() ? it->second : 0.0;
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%zu\n", bin.d_min, bin.d_max, rr, n);
        out += buf;
    }
    out += "mrr,mean_rre,mean_rte,teacher_ir\n";
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g\n", summary.mrr, summary.mean_rre,
                  summary.mean_rte, summary.teacher_ir);
    out += buf;
    return out;
}

BenchmarkSummary summary_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# schema: bench_summary", 0) != 0) {
        throw std::invalid_argument("summary_from_csv: missing schema header");
    }
    if (!std::getline(in, line) || line != "bin_lo,bin_hi,rr,n_pairs") {
        throw std::invalid_argument("summary_from_csv: missing column header");
    }
    BenchmarkSummary s;
    while (std::getline(in, line)) {
        if (line == "mrr,mean_rre,mean_rte,teacher_ir") break;
        DistanceBin bin;
        double rr = 0.0;
        std::size_t n = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%zu", &bin.d_min, &bin.d_max, &rr, &n) != 4) {
            throw std::invalid_argument("summary_from_csv: bad bin row: " + line);
        }
        s.pairs_per_bin[bin] = n;
        if (n > 0) s.rr_per_bin[bin] = rr;
        if (n == 0) ++s.empty_bins;
    }
    if (!std::getline(in, line)) throw std::invalid_argument("summary_from_csv: missing trailer");
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &s.mrr, &s.mean_rre, &s.mean_rte,
                    &s.teacher_ir) != 4) {
        throw std::invalid_argument("summary_from_csv: bad trailer row: " + line);
    }
    return s;
}

}  // namespace pcreg
