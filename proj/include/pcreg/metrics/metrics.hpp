#pragma once

#include <map>
#include <string>
#include <vector>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

struct DistanceBin {
    double d_min = 0.0;
    double d_max = 0.0;

    void validate() const;  // 0 <= d_min < d_max
    bool contains(double d) const { return d >= d_min && d < d_max; }
    friend bool operator<(const DistanceBin& a, const DistanceBin& b) {
        return a.d_min < b.d_min || (a.d_min == b.d_min && a.d_max < b.d_max);
    }
};

std::vector<DistanceBin> default_distance_bins();  // {[5,10), [10,20), [20,30), [30,40), [40,50)}

struct MetricsReport {
    std::string pair_id;
    double rre_deg = 0.0;   // [0, 180]
    double rte_m = 0.0;     // >= 0
    bool success = false;
    DistanceBin bin;
};

struct BenchmarkSummary {
    std::map<DistanceBin, double> rr_per_bin;
    std::map<DistanceBin, std::size_t> pairs_per_bin;
    double mrr = 0.0;
    double mean_rre = 0.0;  // over successes
    double mean_rte = 0.0;
    double teacher_ir = 0.0;
    std::size_t empty_bins = 0;  // excluded from mrr
};

// Geodesic rotation angle in degrees: arccos((trace(R_est' R_gt) - 1)/2),
// argument clamped to [-1, 1].
double rre(const RigidTransform& t_est, const RigidTransform& t_gt);

// Raw translation discrepancy ||t_est - t_gt||.
double rte(const RigidTransform& t_est, const RigidTransform& t_gt);

// success = (rre <= rre_thresh && rte <= rte_thresh); rr per bin, mrr over
// non-empty bins (empty bins excluded and counted). Empty report list is
// rejected.
BenchmarkSummary registration_recall(const std::vector<MetricsReport>& reports,
                                     double rre_thresh_deg, double rte_thresh_m,
                                     const std::vector<DistanceBin>& bins);

// Fraction of correspondences with ||T_gt p_i - q_j|| < residual_thresh.
// Empty set gives 0 (with the caller expected to warn).
double inlier_ratio(const CorrespondenceSet& corrs, const PointCloud& p, const PointCloud& q,
                    const RigidTransform& t_gt, double residual_thresh);

// Summary CSV: schema header, bin rows, then a trailer row with mrr,
// mean_rre, mean_rte, teacher_ir.
std::string summary_to_csv(const BenchmarkSummary& summary);
BenchmarkSummary summary_from_csv(const std::string& csv);

}  // namespace pcreg
