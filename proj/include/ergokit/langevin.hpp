#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ergokit/errors.hpp"
#include "ergokit/stats.hpp"

// Overdamped and underdamped Langevin dynamics with Boltzmann equilibrium checks.
namespace ergokit::langevin {

// Separable potential V(q) = sum_i v(q_i) on R^d.
struct LangevinSpec {
    enum class Potential { quadratic, double_well, polynomial };

    Potential potential = Potential::quadratic;
    double omega2 = 1.0;              // quadratic: v(z) = omega2 z^2 / 2
    double dw_a = 1.0;                // double well: v(z) = a z^4/4 - b z^2/2
    double dw_b = 1.0;
    std::vector<double> coefficients; // polynomial: v(z) = sum c_m z^m

    double kT = 1.0;
    double gamma = 1.0; // friction (underdamped only)
    int d = 1;

    static LangevinSpec quadratic_well(double omega2, double kT, int d = 1);
    static LangevinSpec double_well(double a, double b, double kT, int d = 1);
    static LangevinSpec polynomial(std::vector<double> coeffs, double kT, int d = 1);

    double v(double z) const;
    double v_prime(double z) const;
    double v_second(double z) const;
    void validate() const;
};

struct RunConfig {
    double T = 1000.0;       // total simulated time
    double dt = 1e-2;
    double burn_in_time = 0.0;
    long record_stride = 1;  // record every stride-th step after burn-in
    std::uint64_t seed = 0;
    std::size_t nbins = 64;
    double hist_halfwidth = 0.0; // 0 = derive from the potential
};

// dq = -grad V dt + sqrt(2 kT dt) xi. Records q every record_stride steps.
// Throws if dt * max|v''| reaches 0.5 along the path or the path diverges.
std::vector<Eigen::VectorXd> euler_maruyama_trajectory(const LangevinSpec& spec,
                                                       const Eigen::VectorXd& q0, double T,
                                                       double dt, std::uint64_t seed,
                                                       long record_stride = 1);

// Long-run histogram of q (d = 1) against the quadrature-normalized exp(-V/kT).
HistogramReport stationary_histogram_check(const LangevinSpec& spec, const RunConfig& cfg);

// Batch-means estimate of E[q^power] along one overdamped path (d = 1).
EstimateWithError stationary_moment(const LangevinSpec& spec, const RunConfig& cfg, int power);

struct UnderdampedReport {
    HistogramReport q_marginal;
    HistogramReport p_marginal;
    EstimateWithError p_variance;
    EstimateWithError qp_correlation;
};

// Kinetic Langevin (BAOAB splitting): dq = p dt, dp = -grad V dt - gamma p dt
// + sqrt(2 gamma kT dt) xi; both marginals compared to their Boltzmann factors.
UnderdampedReport underdamped_equilibrium_check(const LangevinSpec& spec, const RunConfig& cfg);

// Normalizing constant of exp(-v/kT) on [-L, L] by Simpson quadrature.
double boltzmann_normalization(const LangevinSpec& spec, double halfwidth, int n_points = 4096);

// Half-width where v(L) - min v exceeds ~40 kT (histogram support).
double confining_range(const LangevinSpec& spec);

} // namespace ergokit::langevin
