#include "pcreg/kern/kernels.hpp"

#include <cmath>

// Reference kernels. Compiled with -ffp-contract=off so the elementwise
// kernels stay bit-comparable with the vector variants.

namespace pcreg::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double l2sqr_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void transform_soa_scalar(const double* r, const double* t,
                          const double* x, const double* y, const double* z,
                          double* ox, double* oy, double* oz, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        ox[i] = ((r[0] * xi + r[1] * yi) + r[2] * zi) + t[0];
        oy[i] = ((r[3] * xi + r[4] * yi) + r[5] * zi) + t[1];
        oz[i] = ((r[6] * xi + r[7] * yi) + r[8] * zi) + t[2];
    }
}

std::size_t argmin_l2sqr_scalar(const double* query, const double* rows,
                                std::size_t n_rows, std::size_t dim,
                                double* best_sq) {
    std::size_t best = 0;
    double best_d = l2sqr_scalar(query, rows, dim);
    for (std::size_t i = 1; i < n_rows; ++i) {
        const double d = l2sqr_scalar(query, rows + i * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best_sq) *best_sq = best_d;
    return best;
}

void compat_row_scalar(double pax, double pay, double paz,
                       double qax, double qay, double qaz,
                       const double* px, const double* py, const double* pz,
                       const double* qx, const double* qy, const double* qz,
                       std::size_t n, double tau, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dpx = pax - px[i], dpy = pay - py[i], dpz = paz - pz[i];
        const double dqx = qax - qx[i], dqy = qay - qy[i], dqz = qaz - qz[i];
        const double dp = std::sqrt((dpx * dpx + dpy * dpy) + dpz * dpz);
        const double dq = std::sqrt((dqx * dqx + dqy * dqy) + dqz * dqz);
        out[i] = std::fabs(dp - dq) < tau ? 1.0 : 0.0;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table = {
        dot_scalar, l2sqr_scalar, transform_soa_scalar,
        argmin_l2sqr_scalar, compat_row_scalar, "scalar",
    };
    return table;
}

}  // namespace pcreg::kern
