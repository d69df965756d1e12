#include "pcreg/features/projection_head.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

#include "pcreg/core/errors.hpp"

namespace pcreg {

namespace {
constexpr std::uint32_t kHeadMagic = 0x48504350;  // "PCPH"
}

ProjectionHead ProjectionHead::near_identity(int d_out, int d_in, std::uint64_t seed,
                                             double noise_sigma) {
    ProjectionHead head;
    head.weight = Eigen::MatrixXd::Zero(d_out, d_in);
    for (int i = 0; i < std::min(d_out, d_in); ++i) head.weight(i, i) = 1.0;
    head.bias = Eigen::VectorXd::Zero(d_out);
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, noise_sigma);
        for (int r = 0; r < d_out; ++r)
            for (int c = 0; c < d_in; ++c) head.weight(r, c) += gauss(rng);
    }
    return head;
}

void ProjectionHead::validate() const {
    if (d_out() < 2) throw std::invalid_argument("ProjectionHead: d_out must be >= 2");
    if (bias.size() != weight.rows()) {
        throw std::invalid_argument("ProjectionHead: bias length must match d_out");
    }
    if (!weight.allFinite() || !bias.allFinite()) {
        throw std::invalid_argument("ProjectionHead: non-finite parameter");
    }
}

FeatureField project(const FeatureField& field, const ProjectionHead& head) {
    head.validate();
    if (field.dim() != head.d_in()) {
        throw std::invalid_argument("project: field dim " + std::to_string(field.dim()) +
                                    " != head d_in " + std::to_string(head.d_in()));
    }
    FeatureField out;
    out.valid = field.valid;
    out.vectors.resize(field.vectors.rows(), head.d_out());
    for (Eigen::Index i = 0; i < field.vectors.rows(); ++i) {
        Eigen::VectorXd v = head.weight * field.vectors.row(i).transpose() + head.bias;
        if (head.normalize_output) {
            const double norm = v.norm();
            if (norm > 1e-12) v /= norm;
        }
        out.vectors.row(i) = v.transpose();
    }
    return out;
}

void write_head(const std::string& path, const ProjectionHead& head) {
    head.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    const std::uint32_t header[4] = {kHeadMagic, static_cast<std::uint32_t>(head.d_out()),
                                     static_cast<std::uint32_t>(head.d_in()),
                                     head.normalize_output ? 1u : 0u};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    std::vector<float> vals;
    vals.reserve(static_cast<std::size_t>(head.d_out()) * head.d_in() + head.d_out());
    for (int r = 0; r < head.d_out(); ++r)
        for (int c = 0; c < head.d_in(); ++c) vals.push_back(static_cast<float>(head.weight(r, c)));
    for (int r = 0; r < head.d_out(); ++r) vals.push_back(static_cast<float>(head.bias(r)));
    out.write(reinterpret_cast<const char*>(vals.data()),
              static_cast<std::streamsize>(vals.size() * sizeof(float)));
    if (!out) throw IoError("short write: " + path);
}

ProjectionHead read_head(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open head file: " + path);
    std::uint32_t header[4];
    if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
        throw IoError("head file header truncated: " + path);
    }
    if (header[0] != kHeadMagic) throw IoError("bad head file magic: " + path);
    const int d_out = static_cast<int>(header[1]);
    const int d_in = static_cast<int>(header[2]);
    std::vector<float> vals(static_cast<std::size_t>(d_out) * d_in + d_out);
    if (!in.read(reinterpret_cast<char*>(vals.data()),
                 static_cast<std::streamsize>(vals.size() * sizeof(float)))) {
        throw IoError("head file truncated: " + path);
    }
    ProjectionHead head;
    head.weight.resize(d_out, d_in);
    head.bias.resize(d_out);
    head.normalize_output = header[3] != 0;
    std::size_t k = 0;
    for (int r = 0; r < d_out; ++r)
        for (int c = 0; c < d_in; ++c) head.weight(r, c) = vals[k++];
    for (int r = 0; r < d_out; ++r) head.bias(r) = vals[k++];
    return head;
}

}  // namespace pcreg
