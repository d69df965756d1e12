#pragma once

#include "pcreg/features/feature_field.hpp"
#include "pcreg/geometry/point_cloud.hpp"

namespace pcreg {

// Local-geometry histogram descriptor: per point, the three Darboux-frame
// angle features of each radius neighbor are binned into bins_per_feature
// buckets each and the concatenated histogram is L2-normalized. Rotation
// invariant by construction. Normals come from k-nearest-neighbor PCA with
// sign fixed toward the sensor origin.
struct DescriptorConfig {
    double radius = 1.0;       // neighborhood radius (m)
    int normal_k = 10;         // neighbors for normal PCA
    int bins_per_feature = 11; // descriptor dim = 3 * bins_per_feature

    int dim() const { return 3 * bins_per_feature; }
    void validate() const;
};

// Points with fewer than 3 radius neighbors get a zero vector and a
// cleared validity flag.
FeatureField extract_descriptors(const PointCloud& cloud, const DescriptorConfig& config);

// k-NN PCA normals, oriented toward the origin. Exposed for tests.
std::vector<Eigen::Vector3d> estimate_normals(const PointCloud& cloud, int k);

}  // namespace pcreg
