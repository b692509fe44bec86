#include <doctest.h>

#include <cmath>

#include "ergokit/gibbs.hpp"
#include "ergokit/stationary.hpp"
#include "oracles.hpp"

using namespace ergokit;
using gibbs::GibbsSpec;
using gibbs::PotentialSpec;
using gibbs::StiffnessMatrix;

namespace {

// Frozen quadrature values (the Laplace two-term prediction is 1/beta):
// E[q^2] under exp(-beta(q^2/2 + q^4/4)) for beta in {10, 20, 40}.
constexpr double kEq2Beta10 = 0.081756140387;
constexpr double kEq2Beta20 = 0.044435271185;
constexpr double kEq2Beta40 = 0.023416264175;

GibbsSpec quartic_1d(double beta) {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    return GibbsSpec{StiffnessMatrix(A), PotentialSpec::polynomial_even(1.0, 2), beta, 1.0};
}

} // namespace

TEST_SUITE("stationary") {

TEST_CASE("stationary solve: linear homogeneous, constant source, confining polynomial") {
    // G' = 0: phi* = 0 immediately
    GibbsSpec none{StiffnessMatrix(gibbs::second_difference_1d(5)), PotentialSpec::none(), 1.0,
                   1.0};
    const auto sol0 = stationary::solve_stationary(none);
    CHECK(sol0.phi_star.norm() == 0.0);
    CHECK(sol0.newton_iters <= 1);

    // constant source G'(phi) = c: phi* = -A^{-1} (c 1), one linear solve
    const double c = 0.7;
    GibbsSpec lin = none;
    lin.potential = PotentialSpec::lipschitz_linear(c);
    const auto sol1 = stationary::solve_stationary(lin);
    const Eigen::VectorXd direct =
        -lin.A.entries().partialPivLu().solve(Eigen::VectorXd::Constant(5, c));
    CHECK((sol1.phi_star - direct).norm() <= 1e-10);
    CHECK(sol1.residual_norm <= 1e-12);

    // confining even polynomial: phi* = 0 and Newton converges fast
    GibbsSpec poly = none;
    poly.potential = PotentialSpec::polynomial_even(2.0, 2);
    const auto sol2 = stationary::solve_stationary(poly);
    CHECK(sol2.phi_star.norm() <= 1e-12);
    CHECK(sol2.newton_iters <= 3);

    // convexity oracle: the configuration energy increases along radial rays
    auto energy = [&](const Eigen::VectorXd& v) {
        return 0.5 * v.dot(poly.A.entries() * v) + gibbs::potential_total(poly, v);
    };
    Eigen::VectorXd dir = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    const double e0 = energy(sol2.phi_star);
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        CHECK(energy(sol2.phi_star + t * dir) > e0);
        CHECK(energy(sol2.phi_star - t * dir) > e0);
    }
}

TEST_CASE("laplace expansion: linear F, quartic 1-d case, gaussian exactness") {
    GibbsSpec spec = quartic_1d(10.0);

    // linear observable: Hess F = 0
    const auto lin =
        stationary::laplace_expansion(spec, ObservableSpec::custom_polynomial({0.0, 1.0}), 10.0);
    CHECK(lin.first_order == 0.0);

    // N=1, A=1, G=q^4/4, F=q^2: zeroth 0, first 1/beta
    for (double beta : {10.0, 20.0, 40.0}) {
        const auto ex =
            stationary::laplace_expansion(quartic_1d(beta), ObservableSpec::site_square(0), beta);
        CHECK(ex.zeroth == 0.0);
        CHECK(ex.first_order == doctest::Approx(1.0 / beta).epsilon(1e-12));
    }

    // gaussian: two terms reproduce Tr((beta A)^{-1}) exactly
    GibbsSpec gs{StiffnessMatrix(gibbs::second_difference_1d(4)), PotentialSpec::none(), 3.0,
                 1.0};
    const auto ex = stationary::laplace_expansion(
        gs, ObservableSpec::custom_polynomial({0.0, 0.0, 1.0}), gs.beta);
    const double tr =
        (gs.beta * gs.A.entries()).llt().solve(Eigen::MatrixXd::Identity(4, 4)).trace();
    CHECK(ex.zeroth == 0.0);
    CHECK(ex.first_order == doctest::Approx(tr).epsilon(1e-13));
}

TEST_CASE("expansion error decays like 1/beta^2 against the quadrature oracle") {
    double errs[3];
    const double betas[3] = {10.0, 20.0, 40.0};
    const double frozen[3] = {kEq2Beta10, kEq2Beta20, kEq2Beta40};
    for (int i = 0; i < 3; ++i) {
        GibbsSpec spec = quartic_1d(betas[i]);
        auto logw = [&](double x) {
            Eigen::VectorXd q(1);
            q << x;
            return gibbs::log_density(spec, q);
        };
        const double oracle = oracles::density_moment_1d(logw, 2);
        CHECK(oracle == doctest::Approx(frozen[i]).epsilon(1e-8));
        errs[i] = std::abs(oracle - 1.0 / betas[i]);
    }
    CHECK(errs[0] / errs[1] >= 2.8);
    CHECK(errs[0] / errs[1] <= 5.2);
    CHECK(errs[1] / errs[2] >= 2.8);
    CHECK(errs[1] / errs[2] <= 5.2);
}

TEST_CASE("concentration: 1/beta law, halving, symmetry") {
    GibbsSpec spec = quartic_1d(1.0);
    gibbs::MCMCConfig cfg;
    cfg.n_samples = 30000;
    cfg.burn_in = 2000;
    cfg.thinning = 3;
    cfg.seed = 404;
    const auto table = stationary::concentration_check(spec, {10.0, 20.0, 40.0}, cfg);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.fitted_slope == doctest::Approx(-1.0).epsilon(0.15));

    // doubling beta halves the mean squared distance (3 sigma)
    const auto& r0 = table.rows[0];
    const auto& r1 = table.rows[1];
    const double se = std::sqrt(0.25 * r0.stderr_ * r0.stderr_ + r1.stderr_ * r1.stderr_);
    CHECK(std::abs(0.5 * r0.mean_sq_distance - r1.mean_sq_distance) <= 3.0 * se);

    // gaussian spec: E||q||^2 exactly Tr((beta A)^{-1}), proportional to 1/beta
    GibbsSpec gs{StiffnessMatrix(gibbs::second_difference_1d(3)), PotentialSpec::none(), 1.0,
                 1.0};
    const auto gtable = stationary::concentration_check(gs, {5.0, 10.0, 20.0}, cfg);
    for (const auto& row : gtable.rows) {
        const double tr = (row.beta * gs.A.entries())
                              .llt()
                              .solve(Eigen::MatrixXd::Identity(3, 3))
                              .trace();
        CHECK(std::abs(row.mean_sq_distance - tr) <= 3.0 * row.stderr_);
    }

    // symmetric measure: sample mean vanishes within 3 sigma
    gibbs::MCMCConfig c2 = cfg;
    c2.seed = 405;
    const auto batch = gibbs::mcmc_sample(spec, c2);
    std::vector<double> firsts(static_cast<std::size_t>(batch.draws.rows()));
    for (Eigen::Index i = 0; i < batch.draws.rows(); ++i)
        firsts[static_cast<std::size_t>(i)] = batch.draws(i, 0);
    const auto m = batch_means(firsts);
    CHECK(std::abs(m.mean) <= 3.0 * m.stderr_);
}

TEST_CASE("non-convergence surfaces as an error") {
    GibbsSpec spec = quartic_1d(1.0);
    spec.potential = PotentialSpec::lipschitz_sine(5.0, 3.0); // nonzero residual at the origin
    CHECK_THROWS_AS(stationary::solve_stationary(spec, 1e-12, 0), non_convergence);
}

} // TEST_SUITE
