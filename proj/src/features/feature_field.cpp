#include "pcreg/features/feature_field.hpp"

#include <fstream>
#include <stdexcept>

#include "pcreg/core/errors.hpp"

namespace pcreg {

namespace {
constexpr std::uint32_t kFeatureMagic = 0x46464350;  // "PCFF"
}

void FeatureField::validate() const {
    if (!vectors.allFinite()) throw std::invalid_argument("FeatureField: non-finite entry");
    if (!valid.empty() && valid.size() != count()) {
        throw std::invalid_argument("FeatureField: validity mask length mismatch");
    }
}

void write_feature_dump(const std::string& path, const FeatureField& field) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    const std::uint32_t header[3] = {kFeatureMagic, static_cast<std::uint32_t>(field.count()),
                                     static_cast<std::uint32_t>(field.dim())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    std::vector<float> row(field.dim());
    for (std::size_t i = 0; i < field.count(); ++i) {
        for (int d = 0; d < field.dim(); ++d) row[d] = static_cast<float>(field.vectors(i, d));
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw IoError("short write: " + path);
}

FeatureField read_feature_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature dump: " + path);
    std::uint32_t header[3];
    if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
        throw IoError("feature dump header truncated: " + path);
    }
    if (header[0] != kFeatureMagic) throw IoError("bad feature dump magic: " + path);
    const std::size_t n = header[1];
    const std::size_t dim = header[2];
    FeatureField field;
    field.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    std::vector<float> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in.read(reinterpret_cast<char*>(row.data()),
                     static_cast<std::streamsize>(dim * sizeof(float)))) {
            throw IoError("feature dump truncated: " + path);
        }
        for (std::size_t d = 0; d < dim; ++d) field.vectors(i, d) = row[d];
    }
    return field;
}

}  // namespace pcreg
