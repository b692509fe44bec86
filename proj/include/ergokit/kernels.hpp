#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the simulation modules. Every kernel has
// a scalar reference implementation and, on x86-64 with AVX2+FMA, a vectorized
// variant selected once at startup. The two are equivalence-tested; reductions
// may differ from the scalar path by reassociation-level rounding only.
namespace ergokit::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool avx2_supported();

// Backend currently dispatched to.
Backend active_backend();
// Force a backend (tests, ERGOKIT_SIMD=scalar). Throws if unsupported on this CPU.
void force_backend(Backend b);
// Back to auto-detection.
void reset_backend();

// y_i += a * x_i
void axpy(double a, const double* x, double* y, std::size_t n);

// out_i = inv_dx2 * (q_{i-1} - 2 q_i + q_{i+1}) with Dirichlet ghosts q_{-1}=q_n=0
void laplacian_dirichlet(const double* q, double* out, std::size_t n, double inv_dx2);

// out_i = q_i^m, m >= 1 (exponentiation by squaring; identical chain on both paths)
void pow_elem(const double* q, double* out, std::size_t n, unsigned m);

// sum_i q_i^m
double pow_sum(const double* q, std::size_t n, unsigned m);

double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);

// out_i = sum_t coeff[t] * u_i^{expo[t]}
void poly_terms(const double* u, double* out, std::size_t n,
                const double* coeff, const unsigned* expo, std::size_t nterms);

// f_i = inv_dx2*(q_{i-1} - 2 q_i + q_{i+1}) - g * q_i^{2k-1}   (Dirichlet ghosts)
void chain_force(const double* q, double* f, std::size_t n,
                 double inv_dx2, double g, unsigned k);

} // namespace ergokit::kernels
