#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ergokit/errors.hpp"
#include "ergokit/observable.hpp"
#include "ergokit/stats.hpp"

// Discretized N-particle nonlinear wave chain on (-a, a) with Dirichlet ends:
// symplectic evolution, energy accounting, time averages, Liouville checks and
// the damped-to-undamped (Caldirola-Kanai) correspondence.
namespace ergokit::chain {

struct ChainParams {
    int N = 1;          // interior sites
    double a = 0.5;     // half-length, domain (-a, a)
    double g = 0.0;     // nonlinear coupling, >= 0
    int k = 1;          // nonlinearity power: potential (g/2k) q^{2k}
    double nu = 0.0;    // viscosity, >= 0
    double beta = 1.0;  // inverse temperature

    double dx() const { return 2.0 * a / static_cast<double>(N); }
    void validate() const;
};

// Positions and momenta of the interior sites; boundary values are implicit zeros.
struct ChainState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;
};

ChainState zero_state(const ChainParams& prm);

// Interior-site coordinate x_i = -a + (i+1) dx, i = 0..N-1.
double site_coordinate(const ChainParams& prm, std::size_t i);

// Normal mode m (1..N) of the harmonic chain, Euclidean-normalized.
std::vector<double> normal_mode(const ChainParams& prm, int m);
// omega_m = (2/dx) sin(m pi / (2(N+1)))
double normal_mode_frequency(const ChainParams& prm, int m);

// H = sum dx p^2/2 + sum dx ((q_{i+1}-q_i)/dx)^2 / 2 + sum dx (g/2k) q^{2k}
double chain_energy(const ChainState& s, const ChainParams& prm);

// One Stormer-Verlet step of dq/dt = p, dp/dt = Lap_h q - g q^{2k-1}.
ChainState leapfrog_step(const ChainState& s, const ChainParams& prm, double dt);

// Verlet with exact exponential friction half-steps; reduces to leapfrog at nu=0.
ChainState damped_step(const ChainState& s, const ChainParams& prm, double dt);

double evaluate_observable(const ObservableSpec& F, const ChainState& s, const ChainParams& prm);

// Trajectory average (1/T) sum F(q(t_j)) dt with batch-means standard error.
EstimateWithError time_average_observable(const ChainState& s0, const ChainParams& prm,
                                          double T, double dt, const ObservableSpec& F);

// Max over t <= T of ||e^{nu t/2} q(t) - beta(t)||_2 / ||beta(t)||_2 where q solves
// the damped chain and beta the transformed undamped chain, integrated independently.
double kanai_residual(const ChainParams& prm, const std::vector<double>& U0, double T, double dt);

// |det J - 1| for the finite-difference Jacobian of the time-T flow map.
double liouville_jacobian_check(const ChainState& s0, const ChainParams& prm, double T,
                                double dt, double fd_step = 1e-5);

// Convenience integration loop; calls visit(state) after every step (and once
// for the initial state).
void integrate(ChainState& s, const ChainParams& prm, double T, double dt,
               const std::function<void(const ChainState&)>& visit = nullptr);

} // namespace ergokit::chain
