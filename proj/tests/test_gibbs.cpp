#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergokit/gibbs.hpp"
#include "oracles.hpp"

using namespace ergokit;
using gibbs::GibbsSpec;
using gibbs::MCMCConfig;
using gibbs::PotentialSpec;
using gibbs::StiffnessMatrix;

namespace {

GibbsSpec quartic_1d(double A0, double beta, double g, int k) {
    Eigen::MatrixXd A(1, 1);
    A << A0;
    return GibbsSpec{StiffnessMatrix(A), PotentialSpec::polynomial_even(g, k), beta, 1.0};
}

// Frozen 1-d quartic moments, adaptive quadrature of exp(-(q^2/2 + q^4/2)).
constexpr double kQuarticEq2 = 0.365957321231;
constexpr double kQuarticEq4 = 0.317021339385;

} // namespace

TEST_SUITE("gibbs") {

TEST_CASE("log density examples") {
    // q = 0 -> 0
    GibbsSpec s1 = quartic_1d(2.0, 1.0, 0.0, 1);
    s1.potential = PotentialSpec::none();
    Eigen::VectorXd q(1);
    q << 0.0;
    CHECK(gibbs::log_density(s1, q) == 0.0);

    // N=1, A=(2), beta=1, q=(1): -(1/2)*2 = -1
    q << 1.0;
    CHECK(gibbs::log_density(s1, q) == doctest::Approx(-1.0).epsilon(1e-14));

    // N=2 chain stiffness, q=(1,1): q^T A q = 2 -> -1
    GibbsSpec s2{StiffnessMatrix(gibbs::second_difference_1d(2)), PotentialSpec::none(), 1.0,
                 1.0};
    Eigen::VectorXd q2(2);
    q2 << 1.0, 1.0;
    CHECK(gibbs::log_density(s2, q2) == doctest::Approx(-1.0).epsilon(1e-14));

    Eigen::VectorXd bad(3);
    bad.setZero();
    CHECK_THROWS_AS(gibbs::log_density(s2, bad), validation_error);
}

TEST_CASE("coercivity constant") {
    CHECK(gibbs::coercivity_constant(StiffnessMatrix(Eigen::MatrixXd::Identity(4, 4))) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // known tridiagonal spectrum: lambda_min = 4 sin^2(pi / (2(N+1)))
    const int N = 10;
    const double expected =
        4.0 * std::pow(std::sin(std::numbers::pi / (2.0 * (N + 1.0))), 2.0);
    const StiffnessMatrix T(gibbs::second_difference_1d(N));
    CHECK(gibbs::coercivity_constant(T) == doctest::Approx(expected).epsilon(1e-10));

    const StiffnessMatrix T2(2.0 * gibbs::second_difference_1d(N));
    CHECK(gibbs::coercivity_constant(T2) ==
          doctest::Approx(2.0 * expected).epsilon(1e-10));

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(gibbs::coercivity_constant(StiffnessMatrix(indef)), not_coercive);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(StiffnessMatrix{asym}, validation_error);
}

TEST_CASE("builders: five-point and biharmonic flavors are coercive") {
    CHECK(gibbs::coercivity_constant(StiffnessMatrix(gibbs::five_point_2d(4, 3))) > 0.0);
    CHECK(gibbs::coercivity_constant(StiffnessMatrix(gibbs::biharmonic_1d(6))) > 0.0);
    // biharmonic = (second difference)^2: lambda_min is the square
    const double l1 = gibbs::coercivity_constant(StiffnessMatrix(gibbs::second_difference_1d(6)));
    const double l2 = gibbs::coercivity_constant(StiffnessMatrix(gibbs::biharmonic_1d(6)));
    CHECK(l2 == doctest::Approx(l1 * l1).epsilon(1e-8));
}

TEST_CASE("gaussian sampling: N=2 chain covariance (exact inverse oracle)") {
    const double beta = 1.0;
    GibbsSpec spec{StiffnessMatrix(gibbs::second_difference_1d(2)), PotentialSpec::none(), beta,
                   1.0};
    MCMCConfig cfg;
    cfg.n_samples = 40000;
    cfg.burn_in = 2000;
    cfg.thinning = 4;
    cfg.seed = 2024;
    const auto batch = gibbs::mcmc_sample(spec, cfg);

    // exact covariance (1/3) [[2,1],[1,2]] at beta=1: Var(q1) = 2/3
    std::vector<double> q1sq(static_cast<std::size_t>(batch.draws.rows()));
    std::vector<double> q1q2(q1sq.size());
    for (Eigen::Index i = 0; i < batch.draws.rows(); ++i) {
        q1sq[static_cast<std::size_t>(i)] = batch.draws(i, 0) * batch.draws(i, 0);
        q1q2[static_cast<std::size_t>(i)] = batch.draws(i, 0) * batch.draws(i, 1);
    }
    const auto v1 = batch_means(q1sq);
    const auto c12 = batch_means(q1q2);
    CHECK(std::abs(v1.mean - 2.0 / 3.0) <= 3.0 * v1.stderr_);
    CHECK(std::abs(c12.mean - 1.0 / 3.0) <= 3.0 * c12.stderr_);
    CHECK(batch.acceptance_rate > 0.1);
    CHECK(batch.acceptance_rate < 0.7);
}

TEST_CASE("same seed gives bit-identical draws") {
    GibbsSpec spec = quartic_1d(1.0, 1.0, 2.0, 2);
    MCMCConfig cfg;
    cfg.n_samples = 500;
    cfg.burn_in = 100;
    cfg.seed = 7;
    const auto a = gibbs::mcmc_sample(spec, cfg);
    const auto b = gibbs::mcmc_sample(spec, cfg);
    CHECK((a.draws - b.draws).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.acceptance_rate == b.acceptance_rate);
}

TEST_CASE("quartic N=1: MCMC matches the quadrature oracle and frozen value") {
    GibbsSpec spec = quartic_1d(1.0, 1.0, 2.0, 2);
    auto logw = [&](double x) {
        Eigen::VectorXd q(1);
        q << x;
        return gibbs::log_density(spec, q);
    };
    const double oracle2 = oracles::density_moment_1d(logw, 2);
    CHECK(oracle2 == doctest::Approx(kQuarticEq2).epsilon(1e-8));
    CHECK(oracles::density_moment_1d(logw, 4) == doctest::Approx(kQuarticEq4).epsilon(1e-8));

    MCMCConfig cfg;
    cfg.n_samples = 60000;
    cfg.burn_in = 3000;
    cfg.thinning = 3;
    cfg.seed = 11;
    const auto e = gibbs::expectation(spec, ObservableSpec::site_square(0), cfg);
    CHECK(std::abs(e.mean - oracle2) <= 3.0 * e.stderr_);

    // library quadrature path agrees with the independent oracle
    const auto eq =
        gibbs::expectation(spec, ObservableSpec::site_square(0), cfg, EstimateMethod::quadrature);
    CHECK(eq.mean == doctest::Approx(oracle2).epsilon(1e-8));
    CHECK(eq.method == EstimateMethod::quadrature);
}

TEST_CASE("expectation: symmetry, gaussian trace, N=2 quadrature agreement") {
    GibbsSpec spec{StiffnessMatrix(gibbs::second_difference_1d(2)),
                   PotentialSpec::polynomial_even(0.5, 2), 1.0, 1.0};
    MCMCConfig cfg;
    cfg.n_samples = 30000;
    cfg.burn_in = 2000;
    cfg.thinning = 4;
    cfg.seed = 5;

    // odd observable vanishes by symmetry
    const auto odd =
        gibbs::expectation(spec, ObservableSpec::custom_polynomial({0.0, 1.0}), cfg);
    CHECK(std::abs(odd.mean) <= 3.0 * odd.stderr_);

    // gaussian spec: E[q^T q] = trace((beta A)^{-1})
    GibbsSpec gs{StiffnessMatrix(gibbs::second_difference_1d(4)), PotentialSpec::none(), 2.0,
                 1.0};
    const double tr =
        (gs.beta * gs.A.entries()).llt().solve(Eigen::MatrixXd::Identity(4, 4)).trace();
    MCMCConfig cfg4 = cfg;
    cfg4.n_samples = 40000;
    const auto sq =
        gibbs::expectation(gs, ObservableSpec::custom_polynomial({0.0, 0.0, 1.0}), cfg4);
    CHECK(std::abs(sq.mean - tr) <= 3.0 * sq.stderr_);

    // N=2: mcmc vs tensor-Simpson quadrature route
    const auto em = gibbs::expectation(spec, ObservableSpec::site_square(0), cfg);
    const auto eq = gibbs::expectation(spec, ObservableSpec::site_square(0), cfg,
                                       EstimateMethod::quadrature);
    CHECK(std::abs(em.mean - eq.mean) <= 3.0 * em.stderr_ + 1e-6);
}

TEST_CASE("detailed balance holds on the recorded proposal stream") {
    GibbsSpec spec{StiffnessMatrix(gibbs::second_difference_1d(4)),
                   PotentialSpec::polynomial_even(1.0, 2), 1.5, 0.5};
    MCMCConfig cfg;
    cfg.n_samples = 50;
    cfg.burn_in = 50;
    cfg.seed = 99;
    std::vector<gibbs::ProposalRecord> rec;
    gibbs::mcmc_sample(spec, cfg, &rec);
    REQUIRE(rec.size() == static_cast<std::size_t>(4 * (50 + 50)));

    // Replay from the origin; at every proposal the kernel's log ratio must be
    // the exact log-density difference, which makes
    // pi(x) k(x->y) = pi(y) k(y->x) an identity of min(1, r).
    Eigen::VectorXd state = Eigen::VectorXd::Zero(4);
    for (const auto& r : rec) {
        CHECK(state(r.site) == doctest::Approx(r.from).epsilon(1e-12));
        Eigen::VectorXd proposed = state;
        proposed(r.site) = r.to;
        const double dlog = gibbs::log_density(spec, proposed) - gibbs::log_density(spec, state);
        CHECK(std::abs(dlog - r.log_ratio) <= 1e-9 * (1.0 + std::abs(dlog)));
        const double lhs = std::min(0.0, r.log_ratio);                 // log accept(x->y)
        const double rhs = r.log_ratio + std::min(0.0, -r.log_ratio);  // log [r * accept(y->x)]
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        if (r.accepted) state = proposed;
    }
}

TEST_CASE("lipschitz weight check") {
    const int N = 4;
    GibbsSpec base{StiffnessMatrix(gibbs::second_difference_1d(N)), PotentialSpec::none(), 1.0,
                   0.5};
    MCMCConfig cfg;
    cfg.n_samples = 10000;
    cfg.seed = 31;

    // G = 0 (linear with c = 0): weight identically one
    GibbsSpec zero = base;
    zero.potential = PotentialSpec::lipschitz_linear(0.0);
    const auto rz = gibbs::lipschitz_weight_check(zero, cfg);
    CHECK(rz.gaussian_mean_weight.mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rz.lipschitz_fraction == 1.0);

    // G = sin(z): Lipschitz with L = 1 on 10^4 consecutive pairs
    GibbsSpec sine = base;
    sine.potential = PotentialSpec::lipschitz_sine(1.0, 1.0);
    const auto rs = gibbs::lipschitz_weight_check(sine, cfg);
    CHECK(rs.lipschitz_fraction == 1.0);
    CHECK(rs.all_weights_finite);

    // G = c z: Gaussian moment-generating function gives the exact mean weight
    const double c = 0.4;
    GibbsSpec lin = base;
    lin.potential = PotentialSpec::lipschitz_linear(c);
    cfg.n_samples = 60000;
    const auto rl = gibbs::lipschitz_weight_check(lin, cfg);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(N);
    const Eigen::VectorXd sol = (lin.beta * lin.A.entries()).llt().solve(ones);
    const double expected = std::exp(0.5 * c * c * lin.dx * lin.dx * ones.dot(sol));
    CHECK(std::abs(rl.gaussian_mean_weight.mean - expected) <=
          3.0 * rl.gaussian_mean_weight.stderr_);

    CHECK_THROWS_AS(gibbs::lipschitz_weight_check(base, cfg), validation_error);
}

TEST_CASE("polynomial reweighting functional lies in (0, 1]") {
    const int N = 6;
    GibbsSpec spec{StiffnessMatrix(gibbs::second_difference_1d(N)),
                   PotentialSpec::polynomial_even(1.3, 2), 1.0, 0.25};
    const Eigen::MatrixXd phi = gibbs::gaussian_samples(spec, 2000, 77);
    for (Eigen::Index s = 0; s < phi.rows(); ++s) {
        const double w =
            std::exp(-spec.beta * gibbs::potential_total(spec, phi.row(s).transpose()));
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("gaussian chain variance is Cauchy in N (continuum probe)") {
    // E[q(x0)^2] at the site nearest x0 = 0 for the a = 1 chain measure,
    // computed exactly from (beta A)^{-1}; successive N-doublings shrink.
    auto center_variance = [](int N) {
        const double dx = 2.0 / N;
        const Eigen::MatrixXd A = gibbs::chain_stiffness(N, dx);
        const Eigen::MatrixXd C = A.llt().solve(Eigen::MatrixXd::Identity(N, N));
        return C(N / 2 - 1, N / 2 - 1);
    };
    const double d1 = std::abs(center_variance(16) - center_variance(8));
    const double d2 = std::abs(center_variance(32) - center_variance(16));
    const double d3 = std::abs(center_variance(64) - center_variance(32));
    CHECK(d2 < d1);
    CHECK(d3 < d2);
}

} // TEST_SUITE
