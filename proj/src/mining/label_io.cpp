#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcreg/core/errors.hpp"
#include "pcreg/io/scan_io.hpp"
#include "pcreg/mining/mining.hpp"

namespace pcreg {

namespace {
constexpr const char* kLabelHeader = "pcreg-label v1";

void write_corr_block(std::ostream& out, const char* name, const CorrespondenceSet& set) {
    out << name << " " << set.size() << " " << set.n_source << " " << set.n_target << "\n";
    for (const auto& c : set.pairs) out << c.i << " " << c.j << "\n";
}

CorrespondenceSet read_corr_block(std::istream& in, const std::string& expect,
                                  const std::string& path, CorrLabel label) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("label file truncated: " + path);
    std::istringstream ss(line);
    std::string name;
    std::size_t n = 0;
    CorrespondenceSet set;
    ss >> name >> n >> set.n_source >> set.n_target;
    if (name != expect) throw IoError("label file: expected '" + expect + "' block in " + path);
    set.pairs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::int32_t i, j;
        if (!(in >> i >> j)) throw IoError("label file correspondence truncated: " + path);
        set.pairs.push_back({i, j, label});
    }
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    return set;
}

std::string format_vector(const Eigen::VectorXd& v) {
    std::string out;
    char buf[64];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), i + 1 < v.size() ? "%.17g " : "%.17g", v(i));
        out += buf;
    }
    return out;
}

Eigen::VectorXd parse_vector(const std::string& line, int dim, const std::string& path) {
    std::istringstream ss(line);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
        if (!(ss >> v(i))) throw IoError("label file anchor truncated: " + path);
    }
    return v;
}

}  // namespace

void write_label_file(const std::string& path, const std::string& pair_id,
                      const PseudoLabel& label) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kLabelHeader << "\n";
    out << "pair " << pair_id << "\n";
    out << "pose " << format_pose_row(label.pose) << "\n";
    out << "anchors " << label.anchors.dim() << "\n";
    out << format_vector(label.anchors.positive) << "\n";
    out << format_vector(label.anchors.negative) << "\n";
    write_corr_block(out, "dense", label.dense);
    write_corr_block(out, "sparse", label.sparse);
    out << "end\n";
    if (!out) throw IoError("short write: " + path);
}

NamedLabel read_label_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open label file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kLabelHeader) {
        throw IoError("bad label file header: " + path);
    }
    NamedLabel out;
    if (!std::getline(in, line) || line.rfind("pair ", 0) != 0) {
        throw IoError("label file: missing pair id: " + path);
    }
    out.pair_id = line.substr(5);
    if (!std::getline(in, line) || line.rfind("pose ", 0) != 0) {
        throw IoError("label file: missing pose: " + path);
    }
    out.label.pose = parse_pose_row(line.substr(5));
    if (!std::getline(in, line) || line.rfind("anchors ", 0) != 0) {
        throw IoError("label file: missing anchors: " + path);
    }
    const int dim = std::stoi(line.substr(8));
    if (!std::getline(in, line)) throw IoError("label file truncated: " + path);
    out.label.anchors.positive = parse_vector(line, dim, path);
    if (!std::getline(in, line)) throw IoError("label file truncated: " + path);
    out.label.anchors.negative = parse_vector(line, dim, path);
    out.label.dense = read_corr_block(in, "dense", path, CorrLabel::Inlier);
    out.label.sparse = read_corr_block(in, "sparse", path, CorrLabel::Inlier);
    if (!std::getline(in, line) || line != "end") {
        throw IoError("label file: missing end marker: " + path);
    }
    return out;
}

}  // namespace pcreg
