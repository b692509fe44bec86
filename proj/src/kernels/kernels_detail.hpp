#pragma once

#include <cstddef>

// Internal dispatch table. Each backend fills one of these.
namespace ergokit::kernels::detail {

struct KernelTable {
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*laplacian_dirichlet)(const double*, double*, std::size_t, double);
    void (*pow_elem)(const double*, double*, std::size_t, unsigned);
    double (*pow_sum)(const double*, std::size_t, unsigned);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    void (*poly_terms)(const double*, double*, std::size_t,
                       const double*, const unsigned*, std::size_t);
    void (*chain_force)(const double*, double*, std::size_t, double, double, unsigned);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table(); // nullptr when not compiled in / not supported

// Shared scalar helper: x^m by squaring. The AVX2 path mirrors this multiply
// chain so elementwise powers are bit-identical across backends.
inline double pow_by_squaring(double x, unsigned m) {
    double r = 1.0;
    double b = x;
    while (m != 0) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1u;
    }
    return r;
}

} // namespace ergokit::kernels::detail
