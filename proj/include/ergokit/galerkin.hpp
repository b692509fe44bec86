#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ergokit/errors.hpp"

// Spectral Galerkin solution of the defocusing polynomial wave equation
// U_tt = U_xx - sum_j c_j U^{e_j} on (-a, a) with Dirichlet ends, in the full
// Dirichlet sine basis phi_m(x) = sin(m pi (x+a)/(2a)) / sqrt(a).
namespace ergokit::galerkin {

struct NonlinearTerm {
    double coeff = 0.0; // >= 0 (defocusing)
    int exponent = 1;   // odd
};

struct GalerkinSpec {
    int n = 8;          // mode count
    double a = 1.0;     // half-length
    std::vector<NonlinearTerm> terms;
    int quad_points = 0; // 0 = auto (>= 2 * max exponent * n, dealiased)

    static GalerkinSpec single_term(int n, double a, double g, int k, int quad_points = 0);

    int max_exponent() const;
    void validate() const;
    // mu_m = (m pi / (2a))^2
    double mode_eigenvalue(int m) const;
};

struct ModeState {
    Eigen::VectorXd u; // amplitudes
    Eigen::VectorXd v; // velocities
    double t = 0.0;
};

// Precomputed quadrature grid and basis tables for one spec.
class GalerkinSystem {
public:
    explicit GalerkinSystem(GalerkinSpec spec);

    const GalerkinSpec& spec() const { return spec_; }
    int n_modes() const { return spec_.n; }
    const Eigen::VectorXd& quad_nodes() const { return nodes_; }
    const Eigen::VectorXd& quad_weights() const { return weights_; }

    // Modal acceleration: -mu_m u_m - <N(U), phi_m>.
    Eigen::VectorXd rhs(const Eigen::VectorXd& u) const;
    // Same projection computed with twice the quadrature points (resolution check).
    Eigen::VectorXd nonlinear_projection(const Eigen::VectorXd& u, bool oversample) const;

    // Conserved energy: |v|^2/2 + sum mu u^2/2 + int sum c_j U^{e_j+1}/(e_j+1) dx.
    double energy(const ModeState& s) const;

    ModeState verlet_step(const ModeState& s, double dt) const;

    // Field values at arbitrary points.
    double field_value(const Eigen::VectorXd& u, double x) const;
    Eigen::VectorXd field_on_grid(const Eigen::VectorXd& u, const Eigen::VectorXd& xs) const;

    // L2 projection of a smooth function onto the basis.
    Eigen::VectorXd project(const std::function<double(double)>& f) const;

    // Field values of U at the quadrature nodes.
    Eigen::VectorXd field_at_nodes(const Eigen::VectorXd& u) const;

private:
    GalerkinSpec spec_;
    Eigen::VectorXd nodes_, weights_;        // base quadrature
    Eigen::VectorXd nodes2_, weights2_;      // oversampled (2x) quadrature
    Eigen::MatrixXd basis_, basis2_;         // (Q x n) basis tables
    Eigen::VectorXd mu_;
};

// Verlet integration with initial velocity zero (modal initial data).
// visit(state) runs after every step and once on the initial state.
void integrate_wave(const GalerkinSystem& sys, const Eigen::VectorXd& u0, double T, double dt,
                    const std::function<void(const ModeState&)>& visit = nullptr);
ModeState integrate_to(const GalerkinSystem& sys, const Eigen::VectorXd& u0, double T, double dt);

struct ConvergenceRow {
    int n_coarse = 0;
    int n_fine = 0;
    double l2_difference = 0.0; // || U_fine(T) - U_coarse(T) ||_{L2} on a common grid
};

std::vector<ConvergenceRow> convergence_study(const GalerkinSpec& base,
                                              const std::vector<int>& mode_counts,
                                              const std::function<double(double)>& U0, double T,
                                              double dt);

struct GronwallReport {
    double sup_ratio = 0.0; // sup_t ||W(t)||_E / (||W(0)||_E e^{M t})
    double M = 0.0;         // measured sup |a(x,t)| along both trajectories
    bool exact_uniqueness = false; // delta = 0 path: W stays identically zero
};

// Evolves U0 and U0 + delta * bump, measures the difference in the energy
// seminorm against the Gronwall envelope with trajectory-measured M.
GronwallReport gronwall_stability_check(const GalerkinSpec& spec,
                                        const std::function<double(double)>& U0, double delta,
                                        double T, double dt);

struct HolderCheck {
    bool pass = false;
    double theta = 0.0;
    double slack = 0.0; // log ||f||_2^{1-theta} ||f||_{2k}^{theta} - log ||f||_q
};

// ||f||_q <= ||f||_2^{1-theta} ||f||_{2k}^theta with 1/q = (1-theta)/2 + theta/(2k),
// norms by uniform-grid quadrature with spacing dx.
HolderCheck holder_interpolation_check(const std::vector<double>& field_values, double dx,
                                       double q, int k);

} // namespace ergokit::galerkin
