// AVX2+FMA variants of the inner-loop kernels. This TU is the only one built
// with -mavx2 -mfma; dispatch guards on cpuid so the binary stays runnable on
// older x86-64.

#include "kernels_detail.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace ergokit::kernels::detail {

namespace {

inline __m256d pow_by_squaring_pd(__m256d x, unsigned m) {
    __m256d r = _mm256_set1_pd(1.0);
    __m256d b = x;
    while (m != 0) {
        if (m & 1u) r = _mm256_mul_pd(r, b);
        b = _mm256_mul_pd(b, b);
        m >>= 1u;
    }
    return r;
}

inline double hsum_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void laplacian_avx2(const double* q, double* out, std::size_t n, double inv_dx2) {
    if (n == 0) return;
    if (n == 1) {
        out[0] = -2.0 * q[0] * inv_dx2;
        return;
    }
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vs = _mm256_set1_pd(inv_dx2);
    out[0] = (q[1] - 2.0 * q[0]) * inv_dx2;
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d l = _mm256_loadu_pd(q + i - 1);
        __m256d c = _mm256_loadu_pd(q + i);
        __m256d r = _mm256_loadu_pd(q + i + 1);
        __m256d v = _mm256_fnmadd_pd(two, c, _mm256_add_pd(l, r));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(v, vs));
    }
    for (; i + 1 < n; ++i)
        out[i] = (q[i - 1] - 2.0 * q[i] + q[i + 1]) * inv_dx2;
    out[n - 1] = (q[n - 2] - 2.0 * q[n - 1]) * inv_dx2;
}

void pow_elem_avx2(const double* q, double* out, std::size_t n, unsigned m) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, pow_by_squaring_pd(_mm256_loadu_pd(q + i), m));
    for (; i < n; ++i) out[i] = pow_by_squaring(q[i], m);
}

double pow_sum_avx2(const double* q, std::size_t n, unsigned m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, pow_by_squaring_pd(_mm256_loadu_pd(q + i), m));
    double s = hsum_pd(acc);
    for (; i < n; ++i) s += pow_by_squaring(q[i], m);
    return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum_pd(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

void poly_terms_avx2(const double* u, double* out, std::size_t n,
                     const double* coeff, const unsigned* expo, std::size_t nterms) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        __m256d s = _mm256_setzero_pd();
        for (std::size_t t = 0; t < nterms; ++t)
            s = _mm256_fmadd_pd(_mm256_set1_pd(coeff[t]), pow_by_squaring_pd(v, expo[t]), s);
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < nterms; ++t)
            s += coeff[t] * pow_by_squaring(u[i], expo[t]);
        out[i] = s;
    }
}

void chain_force_avx2(const double* q, double* f, std::size_t n,
                      double inv_dx2, double g, unsigned k) {
    const unsigned m = 2u * k - 1u;
    if (n < 6) {
        scalar_table().chain_force(q, f, n, inv_dx2, g, k);
        return;
    }
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vs = _mm256_set1_pd(inv_dx2);
    const __m256d vg = _mm256_set1_pd(g);
    f[0] = inv_dx2 * (q[1] - 2.0 * q[0]) - g * pow_by_squaring(q[0], m);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d l = _mm256_loadu_pd(q + i - 1);
        __m256d c = _mm256_loadu_pd(q + i);
        __m256d r = _mm256_loadu_pd(q + i + 1);
        __m256d lap = _mm256_mul_pd(_mm256_fnmadd_pd(two, c, _mm256_add_pd(l, r)), vs);
        __m256d nl = _mm256_mul_pd(vg, pow_by_squaring_pd(c, m));
        _mm256_storeu_pd(f + i, _mm256_sub_pd(lap, nl));
    }
    for (; i + 1 < n; ++i)
        f[i] = inv_dx2 * (q[i - 1] - 2.0 * q[i] + q[i + 1]) - g * pow_by_squaring(q[i], m);
    f[n - 1] = inv_dx2 * (q[n - 2] - 2.0 * q[n - 1]) - g * pow_by_squaring(q[n - 1], m);
}

} // namespace

const KernelTable* avx2_table() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const KernelTable t = {axpy_avx2,    laplacian_avx2, pow_elem_avx2,
                                  pow_sum_avx2, dot_avx2,       sum_sq_avx2,
                                  poly_terms_avx2, chain_force_avx2};
    return &t;
}

} // namespace ergokit::kernels::detail

#else

namespace ergokit::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
} // namespace ergokit::kernels::detail

#endif
