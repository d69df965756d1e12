#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace pcreg {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-point descriptor vectors attached to a cloud; row i belongs to point i.
// `valid` marks points whose descriptor could be computed (empty mask means
// all valid); invalid rows are zero vectors and are skipped by matching.
struct FeatureField {
    RowMatrixXd vectors;
    std::vector<std::uint8_t> valid;

    std::size_t count() const { return static_cast<std::size_t>(vectors.rows()); }
    int dim() const { return static_cast<int>(vectors.cols()); }

    bool is_valid_row(std::size_t i) const { return valid.empty() || valid[i] != 0; }

    const double* row_ptr(std::size_t i) const { return vectors.data() + i * vectors.cols(); }

    // Throws std::invalid_argument on non-finite entries or a mask length
    // that does not match the row count.
    void validate() const;
};

// Binary cache format: magic, count, dim as 32-bit little-endian unsigned,
// then row-major float32 values. Lossy for f64 fields by design.
void write_feature_dump(const std::string& path, const FeatureField& field);
FeatureField read_feature_dump(const std::string& path);

}  // namespace pcreg
