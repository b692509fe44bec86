#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ergokit/errors.hpp"

// Finite-dimensional spectral machinery: Hermitian decompositions, unitary and
// contraction-semigroup evolution, Cesaro time averages and their exact limits.
namespace ergokit::spectral {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

using StateVector = VectorXc;

// Dense Hermitian matrix; construction rejects symmetry violations.
class HermitianOperator {
public:
    explicit HermitianOperator(MatrixXc entries, double rel_tol = 1e-12);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const MatrixXc& entries() const { return entries_; }

private:
    MatrixXc entries_;
};

// Eigenvalues ascending, orthonormal eigenvector columns.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    MatrixXc eigenvectors;
    int source_dim = 0;

    int dim() const { return source_dim; }
    double spectral_diameter() const {
        return source_dim > 0 ? eigenvalues(source_dim - 1) - eigenvalues(0) : 0.0;
    }
    // Groups of indices with eigenvalues within tol of their neighbor; tol < 0
    // selects the default 1e-9 * spectral diameter.
    std::vector<std::vector<int>> degenerate_groups(double tol) const;
};

// Real matrix with spectrum in the closed right half-plane, carried together
// with its (complex) eigendecomposition.
class AccretiveOperator {
public:
    explicit AccretiveOperator(Eigen::MatrixXd entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    const VectorXc& eigenvalues() const { return eigenvalues_; }
    const MatrixXc& eigenvectors() const { return eigenvectors_; }
    const MatrixXc& eigenvectors_inverse() const { return eigenvectors_inv_; }

private:
    Eigen::MatrixXd entries_;
    VectorXc eigenvalues_;
    MatrixXc eigenvectors_;
    MatrixXc eigenvectors_inv_;
};

SpectralDecomposition spectral_decompose(const HermitianOperator& H);

// Decomposition of a real diagonal operator, standard basis eigenvectors.
SpectralDecomposition diagonal_decomposition(const Eigen::VectorXd& eigenvalues);

// V diag(e^{i lambda t}) V^dagger psi; norm preserved.
StateVector evolve_unitary(const SpectralDecomposition& D, const StateVector& psi, double t);

// (1/T) int_0^T |<psi_tilde, e^{itL} psi>|^2 dt, closed form via the
// eigenexpansion (the time integral of e^{it(l_j - l_k)} is analytic).
double cesaro_correlation(const SpectralDecomposition& D, const StateVector& psi_tilde,
                          const StateVector& psi, double T);

// Composite-Simpson cross-check of cesaro_correlation with n_quad subintervals.
double cesaro_correlation_quadrature(const SpectralDecomposition& D,
                                     const StateVector& psi_tilde, const StateVector& psi,
                                     double T, int n_quad);

// T -> infinity limit: sum over eigenvalue-degenerate groups g of |<psi_tilde, P_g psi>|^2.
double cesaro_limit_exact(const SpectralDecomposition& D, const StateVector& psi_tilde,
                          const StateVector& psi, double degeneracy_tol = -1.0);

struct ErgodicAverage {
    StateVector finite_T; // (1/T) int_0^T e^{itL} psi dt
    StateVector limit;    // P_ker(L) psi
};

ErgodicAverage mean_ergodic_vector(const SpectralDecomposition& D, const StateVector& psi,
                                   double T);

// Kernel projector with threshold |lambda| <= max(1e-12, 1e-9 * max|lambda|).
StateVector kernel_projection(const SpectralDecomposition& D, const StateVector& psi);

struct RageAverage {
    double finite_T = 0.0; // (1/T) int_0^T ||K e^{itL} psi||^2 dt
    double limit = 0.0;    // sum over degenerate groups of ||K P_g psi||^2
};

RageAverage compact_rage_average(const SpectralDecomposition& D, const MatrixXc& K,
                                 const StateVector& psi, double T,
                                 double degeneracy_tol = -1.0);

struct SemigroupAverage {
    Eigen::VectorXd finite_T; // (1/T) int_0^T e^{-tA} f dt
    Eigen::VectorXd limit;    // P_ker(A) f
};

SemigroupAverage semigroup_ergodic_limit(const AccretiveOperator& A, const Eigen::VectorXd& f,
                                         double T);

} // namespace ergokit::spectral
