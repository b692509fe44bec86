#include "ergokit/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ergokit::spectral {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_dim(const SpectralDecomposition& D, const StateVector& v, const char* what) {
    if (v.size() != D.source_dim)
        throw validation_error(std::string(what) + ": dimension mismatch");
}

// (1/T) int_0^T e^{i d t} dt = e^{i dT/2} sinc(dT/2); stable for small dT.
Complex cesaro_kernel(double delta, double T) {
    const double x = 0.5 * delta * T;
    double s;
    if (std::abs(x) < 1e-8) {
        s = 1.0 - x * x / 6.0;
    } else {
        s = std::sin(x) / x;
    }
    return std::exp(kI * x) * s;
}

// (1/T) int_0^T e^{-z t} dt for complex z, stable for small |z|T.
Complex semigroup_kernel(Complex z, double T) {
    const Complex w = z * T;
    if (std::abs(w) < 1e-8) return 1.0 - w / 2.0 + w * w / 6.0;
    return (1.0 - std::exp(-w)) / w;
}

double kernel_threshold(const Eigen::VectorXd& eigenvalues) {
    const double m = eigenvalues.cwiseAbs().maxCoeff();
    return std::max(1e-12, 1e-9 * m);
}

} // namespace

HermitianOperator::HermitianOperator(MatrixXc entries, double rel_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw validation_error("HermitianOperator: matrix must be square and non-empty");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        for (Eigen::Index j = i; j < entries_.cols(); ++j) {
            if (std::abs(entries_(i, j) - std::conj(entries_(j, i))) > rel_tol * scale)
                throw validation_error("HermitianOperator: Hermitian symmetry violated");
        }
    }
}

std::vector<std::vector<int>> SpectralDecomposition::degenerate_groups(double tol) const {
    if (tol < 0.0) tol = 1e-9 * spectral_diameter();
    std::vector<std::vector<int>> groups;
    for (int j = 0; j < source_dim; ++j) {
        if (groups.empty() || eigenvalues(j) - eigenvalues(groups.back().back()) > tol)
            groups.emplace_back();
        groups.back().push_back(j);
    }
    return groups;
}

AccretiveOperator::AccretiveOperator(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw validation_error("AccretiveOperator: matrix must be square and non-empty");
    Eigen::EigenSolver<Eigen::MatrixXd> es(entries_);
    if (es.info() != Eigen::Success)
        throw numerical_error("AccretiveOperator: eigensolver failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    const double scale = std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j) {
        if (eigenvalues_(j).real() < -1e-12 * scale)
            throw validation_error("AccretiveOperator: eigenvalue with negative real part");
    }
    Eigen::FullPivLU<MatrixXc> lu(eigenvectors_);
    if (!lu.isInvertible())
        throw numerical_error("AccretiveOperator: not diagonalizable (singular eigenvector matrix)");
    eigenvectors_inv_ = lu.inverse();
}

SpectralDecomposition spectral_decompose(const HermitianOperator& H) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(H.entries());
    if (es.info() != Eigen::Success)
        throw numerical_error("spectral_decompose: eigensolver did not converge (dim=" +
                              std::to_string(H.dim()) + ")");
    SpectralDecomposition D;
    D.eigenvalues = es.eigenvalues();
    D.eigenvectors = es.eigenvectors();
    D.source_dim = H.dim();

    // Reconstruction and orthonormality certificates.
    const MatrixXc R = D.eigenvectors * D.eigenvalues.asDiagonal() *
                       D.eigenvectors.adjoint();
    const double hnorm = H.entries().norm();
    const double rec = (R - H.entries()).norm();
    if (rec > 1e-10 * std::max(1.0, hnorm))
        throw numerical_error("spectral_decompose: reconstruction error " + std::to_string(rec));
    const MatrixXc G = D.eigenvectors.adjoint() * D.eigenvectors;
    if ((G - MatrixXc::Identity(D.source_dim, D.source_dim)).cwiseAbs().maxCoeff() > 1e-12 * D.source_dim)
        throw numerical_error("spectral_decompose: eigenvectors not orthonormal");
    return D;
}

SpectralDecomposition diagonal_decomposition(const Eigen::VectorXd& eigenvalues) {
    const int n = static_cast<int>(eigenvalues.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return eigenvalues(a) < eigenvalues(b); });
    SpectralDecomposition D;
    D.source_dim = n;
    D.eigenvalues.resize(n);
    D.eigenvectors = MatrixXc::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        D.eigenvalues(j) = eigenvalues(order[j]);
        D.eigenvectors(order[j], j) = 1.0;
    }
    return D;
}

StateVector evolve_unitary(const SpectralDecomposition& D, const StateVector& psi, double t) {
    require_dim(D, psi, "evolve_unitary");
    VectorXc w = D.eigenvectors.adjoint() * psi;
    for (Eigen::Index j = 0; j < w.size(); ++j)
        w(j) *= std::exp(kI * (D.eigenvalues(j) * t));
    return D.eigenvectors * w;
}

double cesaro_correlation(const SpectralDecomposition& D, const StateVector& psi_tilde,
                          const StateVector& psi, double T) {
    require_dim(D, psi_tilde, "cesaro_correlation");
    require_dim(D, psi, "cesaro_correlation");
    if (!(T > 0.0)) throw validation_error("cesaro_correlation: T must be positive");
    const VectorXc u = D.eigenvectors.adjoint() * psi_tilde;
    const VectorXc w = D.eigenvectors.adjoint() * psi;
    const int n = D.source_dim;
    // a_j = conj(u_j) w_j; result = Re sum_{jk} a_j conj(a_k) K(l_j - l_k, T)
    VectorXc a(n);
    for (int j = 0; j < n; ++j) a(j) = std::conj(u(j)) * w(j);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += std::norm(a(j));
        for (int k = j + 1; k < n; ++k) {
            const Complex term =
                a(j) * std::conj(a(k)) * cesaro_kernel(D.eigenvalues(j) - D.eigenvalues(k), T);
            acc += 2.0 * term.real();
        }
    }
    return acc;
}

double cesaro_correlation_quadrature(const SpectralDecomposition& D,
                                     const StateVector& psi_tilde, const StateVector& psi,
                                     double T, int n_quad) {
    require_dim(D, psi_tilde, "cesaro_correlation_quadrature");
    require_dim(D, psi, "cesaro_correlation_quadrature");
    if (!(T > 0.0)) throw validation_error("cesaro_correlation_quadrature: T must be positive");
    if (n_quad < 2) throw validation_error("cesaro_correlation_quadrature: n_quad must be >= 2");
    if (n_quad % 2 != 0) ++n_quad; // Simpson needs an even subinterval count
    const VectorXc u = D.eigenvectors.adjoint() * psi_tilde;
    const VectorXc w = D.eigenvectors.adjoint() * psi;
    auto integrand = [&](double t) {
        Complex s = 0.0;
        for (int j = 0; j < D.source_dim; ++j)
            s += std::conj(u(j)) * w(j) * std::exp(kI * (D.eigenvalues(j) * t));
        return std::norm(s);
    };
    const double h = T / n_quad;
    double s = integrand(0.0) + integrand(T);
    for (int i = 1; i < n_quad; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
    return s * h / 3.0 / T;
}

double cesaro_limit_exact(const SpectralDecomposition& D, const StateVector& psi_tilde,
                          const StateVector& psi, double degeneracy_tol) {
    require_dim(D, psi_tilde, "cesaro_limit_exact");
    require_dim(D, psi, "cesaro_limit_exact");
    const VectorXc u = D.eigenvectors.adjoint() * psi_tilde;
    const VectorXc w = D.eigenvectors.adjoint() * psi;
    double acc = 0.0;
    for (const auto& g : D.degenerate_groups(degeneracy_tol)) {
        Complex overlap = 0.0;
        for (int j : g) overlap += std::conj(u(j)) * w(j);
        acc += std::norm(overlap);
    }
    return acc;
}

StateVector kernel_projection(const SpectralDecomposition& D, const StateVector& psi) {
    require_dim(D, psi, "kernel_projection");
    const double tol = kernel_threshold(D.eigenvalues);
    VectorXc w = D.eigenvectors.adjoint() * psi;
    for (Eigen::Index j = 0; j < w.size(); ++j)
        if (std::abs(D.eigenvalues(j)) > tol) w(j) = 0.0;
    return D.eigenvectors * w;
}

ErgodicAverage mean_ergodic_vector(const SpectralDecomposition& D, const StateVector& psi,
                                   double T) {
    require_dim(D, psi, "mean_ergodic_vector");
    if (!(T > 0.0)) throw validation_error("mean_ergodic_vector: T must be positive");
    VectorXc w = D.eigenvectors.adjoint() * psi;
    for (Eigen::Index j = 0; j < w.size(); ++j)
        w(j) *= cesaro_kernel(D.eigenvalues(j), T);
    ErgodicAverage out;
    out.finite_T = D.eigenvectors * w;
    out.limit = kernel_projection(D, psi);
    return out;
}

RageAverage compact_rage_average(const SpectralDecomposition& D, const MatrixXc& K,
                                 const StateVector& psi, double T, double degeneracy_tol) {
    require_dim(D, psi, "compact_rage_average");
    if (K.rows() != D.source_dim || K.cols() != D.source_dim)
        throw validation_error("compact_rage_average: K dimension mismatch");
    if (!(T > 0.0)) throw validation_error("compact_rage_average: T must be positive");
    const VectorXc w = D.eigenvectors.adjoint() * psi;
    const MatrixXc M = K * D.eigenvectors; // column j = K v_j
    const MatrixXc B = M.adjoint() * M;    // B(k,j) = <K v_k, K v_j>
    const int n = D.source_dim;

    RageAverage out;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += std::norm(w(j)) * B(j, j).real();
        for (int k = j + 1; k < n; ++k) {
            const Complex term = w(j) * std::conj(w(k)) * B(k, j) *
                                 cesaro_kernel(D.eigenvalues(j) - D.eigenvalues(k), T);
            acc += 2.0 * term.real();
        }
    }
    out.finite_T = acc;

    double lim = 0.0;
    for (const auto& g : D.degenerate_groups(degeneracy_tol)) {
        VectorXc kp = VectorXc::Zero(M.rows());
        for (int j : g) kp += w(j) * M.col(j);
        lim += kp.squaredNorm();
    }
    out.limit = lim;
    return out;
}

SemigroupAverage semigroup_ergodic_limit(const AccretiveOperator& A, const Eigen::VectorXd& f,
                                         double T) {
    if (f.size() != A.dim())
        throw validation_error("semigroup_ergodic_limit: dimension mismatch");
    if (!(T > 0.0)) throw validation_error("semigroup_ergodic_limit: T must be positive");
    const VectorXc w = A.eigenvectors_inverse() * f.cast<Complex>();
    const double scale = std::max(1.0, A.eigenvalues().cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;

    VectorXc wavg = w, wlim = w;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        wavg(j) *= semigroup_kernel(A.eigenvalues()(j), T);
        if (std::abs(A.eigenvalues()(j)) > tol) wlim(j) = 0.0;
    }
    SemigroupAverage out;
    out.finite_T = (A.eigenvectors() * wavg).real();
    out.limit = (A.eigenvectors() * wlim).real();
    return out;
}

} // namespace ergokit::spectral
