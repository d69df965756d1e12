#include "pcreg/compat/compatibility.hpp"

#include <stdexcept>
#include <vector>

#include "pcreg/kern/kernels.hpp"

namespace pcreg {

CompatibilityMatrix first_order_compat(const PointCloud& p, const PointCloud& q,
                                       const CorrespondenceSet& corrs, double tau_c) {
    if (!(tau_c > 0.0)) throw std::invalid_argument("first_order_compat: tau_c must be positive");
    if (corrs.size() < 2) {
        throw std::invalid_argument("first_order_compat: need at least 2 correspondences");
    }
    const std::size_t n = corrs.size();

    // Endpoint coordinates gathered SoA for the row kernel.
    std::vector<double> px(n), py(n), pz(n), qx(n), qy(n), qz(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& c = corrs.pairs[k];
        px[k] = p.x[c.i];
        py[k] = p.y[c.i];
        pz[k] = p.z[c.i];
        qx[k] = q.x[c.j];
        qy[k] = q.y[c.j];
        qz[k] = q.z[c.j];
    }

    CompatibilityMatrix m;
    m.tau_c = tau_c;
    m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto& kern = kern::active();
    std::vector<double> row(n);
    for (std::size_t a = 0; a < n; ++a) {
        kern.compat_row(px[a], py[a], pz[a], qx[a], qy[a], qz[a], px.data(), py.data(), pz.data(),
                        qx.data(), qy.data(), qz.data(), n, tau_c, row.data());
        for (std::size_t b = 0; b < n; ++b) m.values(a, b) = row[b];
        m.values(a, a) = 1.0;
    }
    return m;
}

CompatibilityMatrix second_order_compat(const CompatibilityMatrix& m) {
    const std::size_t n = m.size();
    CompatibilityMatrix out;
    out.tau_c = m.tau_c;
    out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (n == 0) return out;

    // Rows are contiguous copies so the dot kernel can stream them; the
    // matrix is symmetric, so sum_k M(a,k) M(k,b) = rows_a . rows_b.
    std::vector<double> rows(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) rows[a * n + b] = m.values(a, b);

    const auto& kern = kern::active();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const double common = kern.dot(rows.data() + a * n, rows.data() + b * n, n);
            const double v = m.values(a, b) * common / static_cast<double>(n);
            out.values(a, b) = v;
            out.values(b, a) = v;
        }
    }
    return out;
}

}  // namespace pcreg
