#include "pcreg/kern/kernels.hpp"

#if defined(PCREG_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

// AVX2 variants, 4 x f64 lanes. transform_soa and compat_row use the same
// mul/add association as the scalar reference (no FMA) so results are
// bit-identical; the reductions use FMA and lane-wise accumulation and are
// checked to tolerance instead.

namespace pcreg::kern {
namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double sum = hsum4(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double l2sqr_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double sum = hsum4(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

void transform_soa_avx2(const double* r, const double* t,
                        const double* x, const double* y, const double* z,
                        double* ox, double* oy, double* oz, std::size_t n) {
    const __m256d r0 = _mm256_set1_pd(r[0]), r1 = _mm256_set1_pd(r[1]), r2 = _mm256_set1_pd(r[2]);
    const __m256d r3 = _mm256_set1_pd(r[3]), r4 = _mm256_set1_pd(r[4]), r5 = _mm256_set1_pd(r[5]);
    const __m256d r6 = _mm256_set1_pd(r[6]), r7 = _mm256_set1_pd(r[7]), r8 = _mm256_set1_pd(r[8]);
    const __m256d t0 = _mm256_set1_pd(t[0]), t1 = _mm256_set1_pd(t[1]), t2 = _mm256_set1_pd(t[2]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d yi = _mm256_loadu_pd(y + i);
        const __m256d zi = _mm256_loadu_pd(z + i);
        // ((r0*x + r1*y) + r2*z) + t, matching the scalar association
        __m256d vx = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r0, xi), _mm256_mul_pd(r1, yi)),
                                                 _mm256_mul_pd(r2, zi)),
                                   t0);
        __m256d vy = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r3, xi), _mm256_mul_pd(r4, yi)),
                                                 _mm256_mul_pd(r5, zi)),
                                   t1);
        __m256d vz = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r6, xi), _mm256_mul_pd(r7, yi)),
                                                 _mm256_mul_pd(r8, zi)),
                                   t2);
        _mm256_storeu_pd(ox + i, vx);
        _mm256_storeu_pd(oy + i, vy);
        _mm256_storeu_pd(oz + i, vz);
    }
    for (; i < n; ++i) {
        const double xi = x[i], yi = y[i], zi = z[i];
        ox[i] = ((r[0] * xi + r[1] * yi) + r[2] * zi) + t[0];
        oy[i] = ((r[3] * xi + r[4] * yi) + r[5] * zi) + t[1];
        oz[i] = ((r[6] * xi + r[7] * yi) + r[8] * zi) + t[2];
    }
}

std::size_t argmin_l2sqr_avx2(const double* query, const double* rows,
                              std::size_t n_rows, std::size_t dim,
                              double* best_sq) {
    std::size_t best = 0;
    double best_d = l2sqr_avx2(query, rows, dim);
    for (std::size_t i = 1; i < n_rows; ++i) {
        const double d = l2sqr_avx2(query, rows + i * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best_sq) *best_sq = best_d;
    return best;
}

void compat_row_avx2(double pax, double pay, double paz,
                     double qax, double qay, double qaz,
                     const double* px, const double* py, const double* pz,
                     const double* qx, const double* qy, const double* qz,
                     std::size_t n, double tau, double* out) {
    const __m256d vpax = _mm256_set1_pd(pax), vpay = _mm256_set1_pd(pay), vpaz = _mm256_set1_pd(paz);
    const __m256d vqax = _mm256_set1_pd(qax), vqay = _mm256_set1_pd(qay), vqaz = _mm256_set1_pd(qaz);
    const __m256d vtau = _mm256_set1_pd(tau);
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dpx = _mm256_sub_pd(vpax, _mm256_loadu_pd(px + i));
        const __m256d dpy = _mm256_sub_pd(vpay, _mm256_loadu_pd(py + i));
        const __m256d dpz = _mm256_sub_pd(vpaz, _mm256_loadu_pd(pz + i));
        const __m256d dqx = _mm256_sub_pd(vqax, _mm256_loadu_pd(qx + i));
        const __m256d dqy = _mm256_sub_pd(vqay, _mm256_loadu_pd(qy + i));
        const __m256d dqz = _mm256_sub_pd(vqaz, _mm256_loadu_pd(qz + i));
        const __m256d dp2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dpx, dpx), _mm256_mul_pd(dpy, dpy)),
                                          _mm256_mul_pd(dpz, dpz));
        const __m256d dq2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dqx, dqx), _mm256_mul_pd(dqy, dqy)),
                                          _mm256_mul_pd(dqz, dqz));
        const __m256d diff = _mm256_sub_pd(_mm256_sqrt_pd(dp2), _mm256_sqrt_pd(dq2));
        const __m256d mag = _mm256_andnot_pd(sign_mask, diff);
        const __m256d lt = _mm256_cmp_pd(mag, vtau, _CMP_LT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(lt, ones));
    }
    for (; i < n; ++i) {
        const double dpx = pax - px[i], dpy = pay - py[i], dpz = paz - pz[i];
        const double dqx = qax - qx[i], dqy = qay - qy[i], dqz = qaz - qz[i];
        const double dp = std::sqrt((dpx * dpx + dpy * dpy) + dpz * dpz);
        const double dq = std::sqrt((dqx * dqx + dqy * dqy) + dqz * dqz);
        out[i] = std::fabs(dp - dq) < tau ? 1.0 : 0.0;
    }
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table = {
        dot_avx2, l2sqr_avx2, transform_soa_avx2,
        argmin_l2sqr_avx2, compat_row_avx2, "avx2",
    };
    return &table;
}

}  // namespace pcreg::kern

#else

namespace pcreg::kern {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace pcreg::kern

#endif  // PCREG_HAVE_AVX2
