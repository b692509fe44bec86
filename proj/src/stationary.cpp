#include "ergokit/stationary.hpp"

#include <cmath>

#include "ergokit/rng.hpp"

namespace ergokit::stationary {

namespace {

// Hessian of F at phi for the observable kinds with second derivatives.
Eigen::MatrixXd observable_hessian(const ObservableSpec& F, const Eigen::VectorXd& phi,
                                   double dx) {
    const Eigen::Index n = phi.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    switch (F.kind) {
        case ObservableSpec::Kind::site_square:
            if (static_cast<Eigen::Index>(F.site) >= n)
                throw validation_error("laplace_expansion: site index out of range");
            H(static_cast<Eigen::Index>(F.site), static_cast<Eigen::Index>(F.site)) = 2.0;
            break;
        case ObservableSpec::Kind::l2_norm_sq:
            H = 2.0 * dx * Eigen::MatrixXd::Identity(n, n);
            break;
        case ObservableSpec::Kind::custom_polynomial:
            for (Eigen::Index i = 0; i < n; ++i) {
                double d2 = 0.0;
                for (std::size_t m = 2; m < F.coefficients.size(); ++m)
                    d2 += F.coefficients[m] * static_cast<double>(m) *
                          static_cast<double>(m - 1) * std::pow(phi(i), static_cast<double>(m - 2));
                H(i, i) = d2;
            }
            break;
        case ObservableSpec::Kind::energy:
            throw validation_error("laplace_expansion: energy observable unsupported");
    }
    return H;
}

double observable_value(const ObservableSpec& F, const Eigen::VectorXd& phi, double dx) {
    std::vector<double> q(phi.data(), phi.data() + phi.size());
    return evaluate_config_observable(F, q, dx);
}

} // namespace

StationarySolution solve_stationary(const gibbs::GibbsSpec& spec, double tol, int max_iter) {
    spec.validate();
    if (!(tol > 0.0)) throw validation_error("solve_stationary: tol must be positive");
    const Eigen::MatrixXd& A = spec.A.entries();
    const Eigen::Index n = A.rows();

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return A * x + gibbs::potential_grad(spec, x);
    };

    StationarySolution sol;
    Eigen::VectorXd r = residual(phi);
    double rnorm = r.norm();
    int iter = 0;
    while (rnorm > tol && iter < max_iter) {
        Eigen::MatrixXd J = A;
        const Eigen::VectorXd hg = gibbs::potential_hess_diag(spec, phi);
        J.diagonal() += hg;
        const Eigen::VectorXd step = J.partialPivLu().solve(r);

        // Damped update: halve until the residual decreases.
        double lambda = 1.0;
        Eigen::VectorXd phi_new;
        Eigen::VectorXd r_new;
        double rnorm_new = rnorm;
        for (int halving = 0; halving < 40; ++halving) {
            phi_new = phi - lambda * step;
            r_new = residual(phi_new);
            rnorm_new = r_new.norm();
            if (rnorm_new < rnorm) break;
            lambda *= 0.5;
        }
        if (!(rnorm_new < rnorm))
            throw non_convergence("solve_stationary: damped Newton stalled", rnorm);
        phi = phi_new;
        r = r_new;
        rnorm = rnorm_new;
        ++iter;
    }
    if (rnorm > tol)
        throw non_convergence("solve_stationary: max_iter exceeded", rnorm);
    sol.phi_star = phi;
    sol.residual_norm = rnorm;
    sol.newton_iters = iter;
    return sol;
}

ExpansionResult laplace_expansion(const gibbs::GibbsSpec& spec, const ObservableSpec& F,
                                  double beta) {
    spec.validate();
    if (!(beta > 0.0)) throw validation_error("laplace_expansion: beta must be positive");
    const StationarySolution sol = solve_stationary(spec);
    const Eigen::VectorXd& phi = sol.phi_star;

    Eigen::MatrixXd M = spec.A.entries();
    M.diagonal() += gibbs::potential_hess_diag(spec, phi);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw numerical_error(
            "laplace_expansion: A + Hess G is not positive definite at phi*");

    const Eigen::MatrixXd HF = observable_hessian(F, phi, spec.dx);
    const Eigen::MatrixXd X = llt.solve(HF); // (A + Hess G)^{-1} Hess F

    ExpansionResult out;
    out.beta = beta;
    out.zeroth = observable_value(F, phi, spec.dx);
    out.first_order = X.trace() / (2.0 * beta);
    return out;
}

ConcentrationTable concentration_check(const gibbs::GibbsSpec& spec,
                                       const std::vector<double>& betas,
                                       const gibbs::MCMCConfig& cfg) {
    spec.validate();
    if (betas.size() < 2)
        throw validation_error("concentration_check: need at least two beta values");
    const StationarySolution sol = solve_stationary(spec);

    ConcentrationTable table;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        gibbs::GibbsSpec s = spec;
        s.beta = betas[b];
        gibbs::MCMCConfig c = cfg;
        c.seed = derive_seed(cfg.seed, b);
        const gibbs::SampleBatch batch = gibbs::mcmc_sample(s, c);
        std::vector<double> d2(static_cast<std::size_t>(batch.draws.rows()));
        for (Eigen::Index i = 0; i < batch.draws.rows(); ++i)
            d2[static_cast<std::size_t>(i)] =
                (batch.draws.row(i).transpose() - sol.phi_star).squaredNorm();
        const EstimateWithError e = batch_means(d2);
        table.rows.push_back({betas[b], e.mean, e.stderr_});
    }

    // Least-squares slope of log(msd) vs log(beta).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(table.rows.size());
    for (const auto& r : table.rows) {
        const double x = std::log(r.beta), y = std::log(r.mean_sq_distance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    table.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return table;
}

} // namespace ergokit::stationary
