#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergokit/errors.hpp"
#include "ergokit/observable.hpp"
#include "ergokit/stats.hpp"

// The invariant (Gibbs) measure on R^N: log-density, random-walk Metropolis
// sampling, expectations, coercivity and Lipschitz-integrability checks.
namespace ergokit::gibbs {

// Dense symmetric positive-definite stiffness matrix (discretized elliptic A).
class StiffnessMatrix {
public:
    explicit StiffnessMatrix(Eigen::MatrixXd entries, double sym_tol = 1e-12);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

// tridiag(-1, 2, -1), the 1-D Dirichlet second difference on N interior points.
Eigen::MatrixXd second_difference_1d(int N);
// Five-point 2-D Dirichlet Laplacian stencil matrix on an nx-by-ny interior grid.
Eigen::MatrixXd five_point_2d(int nx, int ny);
// Square of the 1-D second difference (order-2m flavor with m=2).
Eigen::MatrixXd biharmonic_1d(int N);
// Chain stiffness tridiag(-1,2,-1)/dx: (1/2) q^T A q is the discrete gradient energy.
Eigen::MatrixXd chain_stiffness(int N, double dx);

struct PotentialSpec {
    enum class Kind { none, polynomial_even, lipschitz };
    enum class LipschitzName { sine, linear };

    Kind kind = Kind::none;
    // polynomial_even: G_total(q) = (g/2k) dx sum q_i^{2k}
    double g = 0.0;
    int k = 1;
    // lipschitz: G_total(q) = dx sum G(q_i) with G = amp*sin(freq*z) or G = c*z
    LipschitzName name = LipschitzName::sine;
    double amp = 0.0;
    double freq = 1.0;
    double lipschitz_constant = 0.0;

    static PotentialSpec none() { return {}; }
    static PotentialSpec polynomial_even(double g, int k);
    static PotentialSpec lipschitz_sine(double amp, double freq);
    static PotentialSpec lipschitz_linear(double c);

    double value(double z) const;  // nodal G(z)
    double deriv(double z) const;  // G'(z)
    double deriv2(double z) const; // G''(z)
    void validate() const;
};

struct GibbsSpec {
    StiffnessMatrix A;
    PotentialSpec potential;
    double beta = 1.0;
    double dx = 1.0;

    int dim() const { return A.dim(); }
    void validate() const;
};

struct MCMCConfig {
    std::int64_t n_samples = 1000;
    std::int64_t burn_in = 1000;
    std::int64_t thinning = 1;
    double step_scale = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// G_total(q): potential part of the configuration energy.
double potential_total(const GibbsSpec& spec, const Eigen::VectorXd& q);
// grad G_total
Eigen::VectorXd potential_grad(const GibbsSpec& spec, const Eigen::VectorXd& q);
// diagonal of Hess G_total
Eigen::VectorXd potential_hess_diag(const GibbsSpec& spec, const Eigen::VectorXd& q);

// log density = -beta [ (1/2) q^T A q + G_total(q) ], unnormalized, zero at q = 0
// for polynomial kinds.
double log_density(const GibbsSpec& spec, const Eigen::VectorXd& q);

// Smallest eigenvalue of A (the discrete Garding constant); throws if <= 0.
double coercivity_constant(const StiffnessMatrix& A);

struct SampleBatch {
    Eigen::MatrixXd draws; // n_samples rows, dim columns
    double acceptance_rate = 0.0;
    double step_scale_final = 0.0;
};

// One single-site proposal as seen by the Metropolis kernel. The chain starts
// from the origin; replaying accepted moves reconstructs every visited state.
struct ProposalRecord {
    int site = 0;
    double from = 0.0;
    double to = 0.0;
    double log_ratio = 0.0; // log pi(proposed) - log pi(current)
    bool accepted = false;
};

// Random-walk Metropolis with componentwise Gaussian proposals; step scale is
// adapted toward acceptance 0.3 during burn-in, then frozen. Deterministic
// under a fixed seed.
SampleBatch mcmc_sample(const GibbsSpec& spec, const MCMCConfig& cfg,
                        std::vector<ProposalRecord>* record = nullptr);

// MCMC mean with batch-means stderr. For dim <= 2, method=quadrature switches
// to a deterministic tensor-Simpson oracle.
EstimateWithError expectation(const GibbsSpec& spec, const ObservableSpec& F,
                              const MCMCConfig& cfg,
                              EstimateMethod method = EstimateMethod::mcmc);

// Exact samples of the Gaussian part (covariance (beta A)^{-1}) via Cholesky.
Eigen::MatrixXd gaussian_samples(const GibbsSpec& spec, std::int64_t n, std::uint64_t seed);

struct LipschitzWeightReport {
    double lipschitz_fraction = 0.0;   // fraction of consecutive-draw pairs obeying the bound
    EstimateWithError gaussian_mean_weight; // E_gauss[ exp(-beta G_total) ]
    bool all_weights_finite = true;
};

LipschitzWeightReport lipschitz_weight_check(const GibbsSpec& spec, const MCMCConfig& cfg);

} // namespace ergokit::gibbs
