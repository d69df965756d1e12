#include "pcreg/io/scan_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcreg/core/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "scan/pose binary formats assume a little-endian host");

namespace pcreg {

PointCloud read_kitti_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open scan file: " + path);
    const std::streamoff size = in.tellg();
    if (size % 16 != 0) {
        throw IoError("scan file length " + std::to_string(size) +
                      " is not a multiple of 16 bytes: " + path);
    }
    in.seekg(0);
    const std::size_t n = static_cast<std::size_t>(size) / 16;
    std::vector<float> raw(n * 4);
    if (n > 0 && !in.read(reinterpret_cast<char*>(raw.data()), size)) {
        throw IoError("short read: " + path);
    }
    PointCloud cloud;
    cloud.reserve(n);
    cloud.attr.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        cloud.x.push_back(raw[i * 4 + 0]);
        cloud.y.push_back(raw[i * 4 + 1]);
        cloud.z.push_back(raw[i * 4 + 2]);
        cloud.attr.push_back(raw[i * 4 + 3]);
    }
    return cloud;
}

void write_kitti_bin(const std::string& path, const PointCloud& cloud) {
    cloud.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    std::vector<float> raw(cloud.size() * 4);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        raw[i * 4 + 0] = static_cast<float>(cloud.x[i]);
        raw[i * 4 + 1] = static_cast<float>(cloud.y[i]);
        raw[i * 4 + 2] = static_cast<float>(cloud.z[i]);
        raw[i * 4 + 3] = cloud.has_attr() ? static_cast<float>(cloud.attr[i]) : 0.0f;
    }
    if (!raw.empty() &&
        !out.write(reinterpret_cast<const char*>(raw.data()),
                   static_cast<std::streamsize>(raw.size() * sizeof(float)))) {
        throw IoError("short write: " + path);
    }
}

PointCloud read_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open PLY: " + path);
    std::string line;
    std::size_t n_vertices = 0;
    bool header_done = false;
    if (!std::getline(in, line) || line != "ply") throw IoError("not a PLY file: " + path);
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "element") {
            std::string what;
            ss >> what >> n_vertices;
            if (what != "vertex") throw IoError("unsupported PLY element in " + path);
        } else if (tok == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "ascii") throw IoError("only ascii PLY supported: " + path);
        } else if (tok == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw IoError("PLY header not terminated: " + path);
    PointCloud cloud;
    cloud.reserve(n_vertices);
    for (std::size_t i = 0; i < n_vertices; ++i) {
        double x, y, z;
        if (!(in >> x >> y >> z)) throw IoError("PLY vertex record truncated: " + path);
        cloud.add({x, y, z});
    }
    return cloud;
}

void write_ply(const std::string& path, const PointCloud& cloud) {
    cloud.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    char buf[128];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", cloud.x[i], cloud.y[i], cloud.z[i]);
        out << buf;
    }
    if (!out) throw IoError("short write: " + path);
}

std::string format_pose_row(const RigidTransform& t) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g",
                  t.rotation(0, 0), t.rotation(0, 1), t.rotation(0, 2), t.translation(0),
                  t.rotation(1, 0), t.rotation(1, 1), t.rotation(1, 2), t.translation(1),
                  t.rotation(2, 0), t.rotation(2, 1), t.rotation(2, 2), t.translation(2));
    return buf;
}

RigidTransform parse_pose_row(const std::string& line) {
    std::istringstream ss(line);
    double v[12];
    for (double& e : v) {
        if (!(ss >> e)) throw IoError("pose row needs 12 numbers: '" + line + "'");
    }
    RigidTransform t;
    t.rotation << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    t.translation << v[3], v[7], v[11];
    return t;
}

std::vector<RigidTransform> read_pose_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pose file: " + path);
    std::vector<RigidTransform> poses;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        poses.push_back(parse_pose_row(line));
    }
    return poses;
}

void write_pose_file(const std::string& path, const std::vector<RigidTransform>& poses) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& t : poses) out << format_pose_row(t) << "\n";
    if (!out) throw IoError("short write: " + path);
}

}  // namespace pcreg
