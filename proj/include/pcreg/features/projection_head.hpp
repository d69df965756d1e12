#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "pcreg/features/feature_field.hpp"

namespace pcreg {

// Trainable linear map over descriptors: out = W f + b, optionally
// L2-normalized. This is the adaptable part of both teacher and student.
struct ProjectionHead {
    Eigen::MatrixXd weight;  // d_out x d_in
    Eigen::VectorXd bias;    // d_out
    bool normalize_output = true;

    int d_out() const { return static_cast<int>(weight.rows()); }
    int d_in() const { return static_cast<int>(weight.cols()); }

    // Truncated identity plus Gaussian noise; starts near a no-op on the
    // leading descriptor dimensions.
    static ProjectionHead near_identity(int d_out, int d_in, std::uint64_t seed,
                                        double noise_sigma = 0.01);

    void validate() const;  // finite entries, d_out >= 2
};

// Projects every row; propagates the validity mask. Dimension mismatch is
// rejected with std::invalid_argument.
FeatureField project(const FeatureField& field, const ProjectionHead& head);

// Binary format: magic, d_out, d_in, normalize flag (u32 LE each), then
// row-major float32 weights followed by float32 bias.
void write_head(const std::string& path, const ProjectionHead& head);
ProjectionHead read_head(const std::string& path);

}  // namespace pcreg
