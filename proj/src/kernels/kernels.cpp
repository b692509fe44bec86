#include "ergokit/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_detail.hpp"

namespace ergokit::kernels {

namespace {

namespace d = detail;

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void laplacian_scalar(const double* q, double* out, std::size_t n, double inv_dx2) {
    if (n == 0) return;
    if (n == 1) {
        out[0] = -2.0 * q[0] * inv_dx2;
        return;
    }
    out[0] = (q[1] - 2.0 * q[0]) * inv_dx2;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (q[i - 1] - 2.0 * q[i] + q[i + 1]) * inv_dx2;
    out[n - 1] = (q[n - 2] - 2.0 * q[n - 1]) * inv_dx2;
}

void pow_elem_scalar(const double* q, double* out, std::size_t n, unsigned m) {
    for (std::size_t i = 0; i < n; ++i) out[i] = d::pow_by_squaring(q[i], m);
}

double pow_sum_scalar(const double* q, std::size_t n, unsigned m) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += d::pow_by_squaring(q[i], m);
    return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_sq_scalar(const double* x, std::size_t n) { return dot_scalar(x, x, n); }

void poly_terms_scalar(const double* u, double* out, std::size_t n,
                       const double* coeff, const unsigned* expo, std::size_t nterms) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < nterms; ++t)
            s += coeff[t] * d::pow_by_squaring(u[i], expo[t]);
        out[i] = s;
    }
}

void chain_force_scalar(const double* q, double* f, std::size_t n,
                        double inv_dx2, double g, unsigned k) {
    const unsigned m = 2u * k - 1u;
    for (std::size_t i = 0; i < n; ++i) {
        const double qm1 = (i > 0) ? q[i - 1] : 0.0;
        const double qp1 = (i + 1 < n) ? q[i + 1] : 0.0;
        f[i] = inv_dx2 * (qm1 - 2.0 * q[i] + qp1) - g * d::pow_by_squaring(q[i], m);
    }
}

const d::KernelTable& active_table();

std::atomic<const d::KernelTable*> g_forced{nullptr};

const d::KernelTable* auto_table() {
    static const d::KernelTable* t = [] {
        if (const char* env = std::getenv("ERGOKIT_SIMD")) {
            if (std::strcmp(env, "scalar") == 0) return &d::scalar_table();
            if (std::strcmp(env, "avx2") == 0 && d::avx2_table() != nullptr)
                return d::avx2_table();
        }
        if (const d::KernelTable* a = d::avx2_table()) return a;
        return &d::scalar_table();
    }();
    return t;
}

const d::KernelTable& active_table() {
    if (const d::KernelTable* f = g_forced.load(std::memory_order_acquire)) return *f;
    return *auto_table();
}

} // namespace

namespace detail {

const KernelTable& scalar_table() {
    static const KernelTable t = {axpy_scalar,     laplacian_scalar, pow_elem_scalar,
                                  pow_sum_scalar,  dot_scalar,       sum_sq_scalar,
                                  poly_terms_scalar, chain_force_scalar};
    return t;
}

} // namespace detail

const char* backend_name(Backend b) {
    return b == Backend::scalar ? "scalar" : "avx2";
}

bool avx2_supported() { return detail::avx2_table() != nullptr; }

Backend active_backend() {
    return &active_table() == &detail::scalar_table() ? Backend::scalar : Backend::avx2;
}

void force_backend(Backend b) {
    if (b == Backend::scalar) {
        g_forced.store(&detail::scalar_table(), std::memory_order_release);
        return;
    }
    const detail::KernelTable* a = detail::avx2_table();
    if (a == nullptr) throw std::runtime_error("kernels: avx2 backend not available on this CPU");
    g_forced.store(a, std::memory_order_release);
}

void reset_backend() { g_forced.store(nullptr, std::memory_order_release); }

void axpy(double a, const double* x, double* y, std::size_t n) {
    active_table().axpy(a, x, y, n);
}
void laplacian_dirichlet(const double* q, double* out, std::size_t n, double inv_dx2) {
    active_table().laplacian_dirichlet(q, out, n, inv_dx2);
}
void pow_elem(const double* q, double* out, std::size_t n, unsigned m) {
    active_table().pow_elem(q, out, n, m);
}
double pow_sum(const double* q, std::size_t n, unsigned m) {
    return active_table().pow_sum(q, n, m);
}
double dot(const double* x, const double* y, std::size_t n) {
    return active_table().dot(x, y, n);
}
double sum_sq(const double* x, std::size_t n) { return active_table().sum_sq(x, n); }
void poly_terms(const double* u, double* out, std::size_t n,
                const double* coeff, const unsigned* expo, std::size_t nterms) {
    active_table().poly_terms(u, out, n, coeff, expo, nterms);
}
void chain_force(const double* q, double* f, std::size_t n,
                 double inv_dx2, double g, unsigned k) {
    active_table().chain_force(q, f, n, inv_dx2, g, k);
}

} // namespace ergokit::kernels
