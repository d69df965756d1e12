#pragma once

#include <cstddef>

// Low-level arithmetic kernels used by the hot loops (feature matching,
// compatibility matrices, point transforms). Every kernel has a scalar
// reference implementation and, on capable x86-64 hosts, an AVX2 variant.
// The active table is chosen once at startup; PCREG_SIMD=scalar|avx2|auto
// overrides the choice. SIMD and scalar variants are equivalence-tested
// against each other: elementwise kernels (transform_soa, compat_row)
// bit-exactly, reductions (dot, l2sqr) to tight relative tolerance.
namespace pcreg::kern {

// Reductions over double arrays, accumulated in double.
using ReduceFn = double (*)(const double* a, const double* b, std::size_t n);

// out[i] = R * p[i] + t over structure-of-arrays coordinates. R row-major 3x3.
using TransformFn = void (*)(const double* rotation, const double* translation,
                             const double* x, const double* y, const double* z,
                             double* out_x, double* out_y, double* out_z,
                             std::size_t n);

// Index of the row (row-major, n_rows x dim) with minimum squared L2 distance
// to `query`; lowest index wins ties. Writes the winning squared distance.
using ArgminFn = std::size_t (*)(const double* query, const double* rows,
                                 std::size_t n_rows, std::size_t dim,
                                 double* best_sq);

// One row of a first-order spatial-compatibility matrix:
// out[b] = 1.0 if | ||pa-pb|| - ||qa-qb|| | < tau else 0.0.
using CompatRowFn = void (*)(double pax, double pay, double paz,
                             double qax, double qay, double qaz,
                             const double* px, const double* py, const double* pz,
                             const double* qx, const double* qy, const double* qz,
                             std::size_t n, double tau, double* out);

struct KernelTable {
    ReduceFn dot;
    ReduceFn l2sqr;
    TransformFn transform_soa;
    ArgminFn argmin_l2sqr;
    CompatRowFn compat_row;
    const char* isa;
};

const KernelTable& scalar_kernels();

// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

// Dispatched table (cached after first call).
const KernelTable& active();

}  // namespace pcreg::kern
