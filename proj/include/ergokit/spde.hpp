#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ergokit/errors.hpp"
#include "ergokit/gibbs.hpp"
#include "ergokit/stats.hpp"

// Semilinear stochastic heat equation dU = [ (1/2) U_xx - sum_{odd j} lambda_j U^j ] dt + dW
// on (-a, a) with Dirichlet ends, discretized on M interior nodes; unit space-time
// white noise (variance dt/dx per node per step).
namespace ergokit::langevin {

struct SPDESpec {
    double a = 1.0;                  // half-length
    int M = 16;                      // interior grid points
    std::vector<double> lambda_odd;  // lambda_odd[i] multiplies U^{2i+1}; all >= 0

    double dx() const { return 2.0 * a / (M + 1.0); }
    // Dirichlet eigenvalue of -Lap_h: mu_m = (4/dx^2) sin^2(m pi / (2(M+1))), m = 1..M.
    double dirichlet_eigenvalue(int m) const;
    void validate() const;
};

struct SPDERunConfig {
    double T = 1000.0;
    double dt = 1e-3;
    double burn_in_time = 0.0;
    long record_stride = 10;
    std::uint64_t seed = 0;
    double noise_amp = 1.0; // 0 switches the stirring off (deterministic heat decay)
};

// Semi-implicit Euler-Maruyama: implicit in (1/2) Lap_h, explicit in the odd
// polynomial drift, additive noise sqrt(dt/dx) per node. Calls visit(t, U)
// every record_stride steps (after burn-in).
void spde_run(const SPDESpec& spec, const Eigen::VectorXd& U0, const SPDERunConfig& cfg,
              const std::function<void(double, const Eigen::VectorXd&)>& visit);

// Convenience wrapper returning recorded snapshots.
std::vector<Eigen::VectorXd> spde_evolve(const SPDESpec& spec, const Eigen::VectorXd& U0,
                                         const SPDERunConfig& cfg);

// L2(dx)-normalized discrete sine mode m = 1..M.
Eigen::VectorXd spde_mode(const SPDESpec& spec, int m);
// Modal coefficient of U against spde_mode(m) in the L2(dx) inner product.
double spde_mode_coefficient(const SPDESpec& spec, const Eigen::VectorXd& U, int m);

// Lattice invariant density of the discretized gradient flow, from detailed
// balance: log p(U) = -(1/(2 dx)) sum (U_{i+1}-U_i)^2 - 2 dx sum V(U_i) with
// V(U) = sum_j lambda_j U^{j+1}/(j+1). Expressed as a GibbsSpec so the MCMC
// sampler of the gibbs module can target it; at most one nonlinear lambda term.
gibbs::GibbsSpec lattice_invariant_measure(const SPDESpec& spec);

struct SPDEMomentRow {
    int node = 0;
    int moment = 2; // 2 or 4
    EstimateWithError sde;
    EstimateWithError mcmc;
};

struct SPDEStationaryReport {
    std::vector<SPDEMomentRow> rows;
    bool all_within(double n_sigma) const {
        for (const auto& r : rows)
            if (!agree_within(r.sde, r.mcmc, n_sigma)) return false;
        return true;
    }
};

// Long-run SDE moments {E[U_i^2], E[U_i^4]} at probe nodes vs MCMC sampling of
// the lattice invariant measure.
SPDEStationaryReport spde_stationary_check(const SPDESpec& spec, const SPDERunConfig& cfg,
                                           const gibbs::MCMCConfig& mcmc_cfg,
                                           const std::vector<int>& probe_nodes);

// One step's noise vector (exposed for the calibration test).
Eigen::VectorXd spde_noise(const SPDESpec& spec, double dt, std::mt19937_64& rng,
                           double noise_amp = 1.0);

} // namespace ergokit::langevin
