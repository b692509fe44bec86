#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracles {

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n % 2 != 0) ++n;
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

double density_moment_1d(const std::function<double(double)>& log_w, int power) {
    const double l0 = log_w(0.0);
    double L = 0.5;
    while (std::max(log_w(L), log_w(-L)) > l0 - 60.0) L *= 1.4;
    auto w = [&](double x) { return std::exp(log_w(x)); };
    const double z = simpson(w, -L, L, 8192);
    const double m = simpson([&](double x) { return std::pow(x, power) * w(x); }, -L, L, 8192);
    return m / z;
}

std::vector<double> harmonic_chain_position(const ergokit::chain::ChainParams& prm,
                                            const std::vector<double>& q0,
                                            const std::vector<double>& p0, double t) {
    const int N = prm.N;
    std::vector<double> q(static_cast<std::size_t>(N), 0.0);
    for (int m = 1; m <= N; ++m) {
        const auto mode = ergokit::chain::normal_mode(prm, m);
        const double w = ergokit::chain::normal_mode_frequency(prm, m);
        double a = 0.0, b = 0.0;
        for (int i = 0; i < N; ++i) {
            a += mode[static_cast<std::size_t>(i)] * q0[static_cast<std::size_t>(i)];
            b += mode[static_cast<std::size_t>(i)] * p0[static_cast<std::size_t>(i)];
        }
        const double amp = a * std::cos(w * t) + (w > 0.0 ? b / w * std::sin(w * t) : b * t);
        for (int i = 0; i < N; ++i) q[static_cast<std::size_t>(i)] += amp * mode[static_cast<std::size_t>(i)];
    }
    return q;
}

std::vector<double> damped_chain_position(const ergokit::chain::ChainParams& prm,
                                          const std::vector<double>& q0, double t) {
    const int N = prm.N;
    const double nu = prm.nu;
    std::vector<double> q(static_cast<std::size_t>(N), 0.0);
    for (int m = 1; m <= N; ++m) {
        const auto mode = ergokit::chain::normal_mode(prm, m);
        const double w = ergokit::chain::normal_mode_frequency(prm, m);
        double a = 0.0;
        for (int i = 0; i < N; ++i)
            a += mode[static_cast<std::size_t>(i)] * q0[static_cast<std::size_t>(i)];
        // q'' = -w^2 q - nu q', q(0) = a, q'(0) = 0
        const double disc = w * w - 0.25 * nu * nu;
        double amp;
        if (disc > 0.0) {
            const double wd = std::sqrt(disc);
            amp = a * std::exp(-0.5 * nu * t) *
                  (std::cos(wd * t) + 0.5 * nu / wd * std::sin(wd * t));
        } else {
            const double mu = std::sqrt(-disc);
            amp = a * std::exp(-0.5 * nu * t) *
                  (std::cosh(mu * t) + 0.5 * nu / mu * std::sinh(mu * t));
        }
        for (int i = 0; i < N; ++i) q[static_cast<std::size_t>(i)] += amp * mode[static_cast<std::size_t>(i)];
    }
    return q;
}

Eigen::VectorXd rk4_semigroup_average(const Eigen::MatrixXd& A, const Eigen::VectorXd& f,
                                      double T, double dt) {
    const long n = std::lround(T / dt);
    Eigen::VectorXd x = f;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(f.size());
    auto rhs = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return -(A * v); };
    for (long s = 0; s < n; ++s) {
        acc += 0.5 * dt * x; // trapezoid
        const Eigen::VectorXd k1 = rhs(x);
        const Eigen::VectorXd k2 = rhs(x + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = rhs(x + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = rhs(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        acc += 0.5 * dt * x;
    }
    return acc / T;
}

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = std::complex<double>(g(rng), g(rng));
    return 0.5 * (M + M.adjoint().eval());
}

Eigen::VectorXcd random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(g(rng), g(rng));
    return v / v.norm();
}

std::vector<double> random_smooth_field(int npoints, double a, int nmodes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> coeff(static_cast<std::size_t>(nmodes));
    for (int m = 0; m < nmodes; ++m)
        coeff[static_cast<std::size_t>(m)] = g(rng) / ((m + 1.0) * (m + 1.0));
    std::vector<double> f(static_cast<std::size_t>(npoints), 0.0);
    for (int i = 0; i < npoints; ++i) {
        const double x = -a + 2.0 * a * (i + 0.5) / npoints;
        for (int m = 1; m <= nmodes; ++m)
            f[static_cast<std::size_t>(i)] +=
                coeff[static_cast<std::size_t>(m - 1)] *
                std::sin(m * std::numbers::pi * (x + a) / (2.0 * a));
    }
    return f;
}

} // namespace oracles
