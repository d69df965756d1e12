#include "pcreg/geometry/kdtree.hpp"

#include <algorithm>
#include <limits>

namespace pcreg {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree3::KdTree3(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    pts_.resize(n * 3);
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts_[i * 3 + 0] = cloud.x[i];
        pts_[i * 3 + 1] = cloud.y[i];
        pts_[i * 3 + 2] = cloud.z[i];
        order_[i] = static_cast<std::uint32_t>(i);
    }
    if (n > 0) root_ = build(0, static_cast<std::uint32_t>(n));
}

double KdTree3::sq_dist(std::size_t idx, const Eigen::Vector3d& q) const {
    const double dx = pts_[idx * 3 + 0] - q.x();
    const double dy = pts_[idx * 3 + 1] - q.y();
    const double dz = pts_[idx * 3 + 2] - q.z();
    return dx * dx + dy * dy + dz * dz;
}

std::int32_t KdTree3::build(std::uint32_t begin, std::uint32_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    // Split on the widest axis at the median.
    double lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
        lo[a] = std::numeric_limits<double>::infinity();
        hi[a] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t i = begin; i < end; ++i) {
        for (int a = 0; a < 3; ++a) {
            const double v = coord(order_[i], a);
            lo[a] = std::min(lo[a], v);
            hi[a] = std::max(hi[a], v);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    if (hi[axis] - lo[axis] <= 0.0) {
        // All points coincide on every axis; keep as a leaf.
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = coord(a, axis), cb = coord(b, axis);
                         return ca < cb || (ca == cb && a < b);
                     });
    node.axis = axis;
    node.split = coord(order_[mid], axis);
    nodes_.push_back(node);
    const std::int32_t self = static_cast<std::int32_t>(nodes_.size() - 1);
    const std::int32_t l = build(begin, mid);
    const std::int32_t r = build(mid, end);
    nodes_[self].left = l;
    nodes_[self].right = r;
    return self;
}

void KdTree3::nearest_rec(std::int32_t ni, const Eigen::Vector3d& q, Hit& best) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            const double d = sq_dist(idx, q);
            if (d < best.sq_dist || (d == best.sq_dist && idx < best.index)) {
                best.sq_dist = d;
                best.index = idx;
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const std::int32_t near = delta < 0 ? node.left : node.right;
    const std::int32_t far = delta < 0 ? node.right : node.left;
    nearest_rec(near, q, best);
    if (delta * delta <= best.sq_dist) nearest_rec(far, q, best);
}

KdTree3::Hit KdTree3::nearest(const Eigen::Vector3d& q) const {
    Hit best{static_cast<std::size_t>(-1), std::numeric_limits<double>::infinity()};
    if (root_ >= 0) nearest_rec(root_, q, best);
    return best;
}

void KdTree3::radius_rec(std::int32_t ni, const Eigen::Vector3d& q, double r_sq,
                         std::vector<std::size_t>& out) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            if (sq_dist(idx, q) <= r_sq) out.push_back(idx);
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const std::int32_t near = delta < 0 ? node.left : node.right;
    const std::int32_t far = delta < 0 ? node.right : node.left;
    radius_rec(near, q, r_sq, out);
    if (delta * delta <= r_sq) radius_rec(far, q, r_sq, out);
}

std::vector<std::size_t> KdTree3::radius_search(const Eigen::Vector3d& q, double radius) const {
    std::vector<std::size_t> out;
    if (root_ >= 0) radius_rec(root_, q, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

void KdTree3::knn_rec(std::int32_t ni, const Eigen::Vector3d& q, std::size_t k,
                      std::vector<Hit>& heap) const {
    auto worse = [](const Hit& a, const Hit& b) {
        return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
    };
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            const Hit h{idx, sq_dist(idx, q)};
            if (heap.size() < k) {
                heap.push_back(h);
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (worse(h, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = h;
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const std::int32_t near = delta < 0 ? node.left : node.right;
    const std::int32_t far = delta < 0 ? node.right : node.left;
    knn_rec(near, q, k, heap);
    if (heap.size() < k || delta * delta <= heap.front().sq_dist) knn_rec(far, q, k, heap);
}

std::vector<KdTree3::Hit> KdTree3::knn(const Eigen::Vector3d& q, std::size_t k) const {
    std::vector<Hit> heap;
    if (root_ >= 0 && k > 0) knn_rec(root_, q, k, heap);
    std::sort(heap.begin(), heap.end(), [](const Hit& a, const Hit& b) {
        return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
    });
    return heap;
}

}  // namespace pcreg
