#pragma once

#include <Eigen/Core>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/geometry/point_cloud.hpp"

namespace pcreg {

// Symmetric pairwise-compatibility scores in [0, 1] over a correspondence
// set. First-order construction yields a binary matrix with unit diagonal;
// second-order rescaling keeps the diagonal in [0, 1].
struct CompatibilityMatrix {
    Eigen::MatrixXd values;
    double tau_c = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

// Binary rigidity test: entry (a, b) = 1 iff the source-side and
// target-side pairwise distances agree within tau_c.
CompatibilityMatrix first_order_compat(const PointCloud& p, const PointCloud& q,
                                       const CorrespondenceSet& corrs, double tau_c);

// Entry (a, b) = M(a, b) * sum_k M(a, k) M(k, b), rescaled by 1/N.
// Compatibility reinforced by the count of commonly compatible neighbors.
CompatibilityMatrix second_order_compat(const CompatibilityMatrix& m);

}  // namespace pcreg
