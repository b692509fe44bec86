#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergokit/rng.hpp"
#include "ergokit/spde.hpp"
#include "oracles.hpp"

using namespace ergokit;
using langevin::SPDERunConfig;
using langevin::SPDESpec;

TEST_SUITE("spde") {

TEST_CASE("same seed gives the identical field path") {
    SPDESpec spec;
    spec.a = 1.0;
    spec.M = 12;
    spec.lambda_odd = {0.0, 0.5};
    SPDERunConfig cfg;
    cfg.T = 5.0;
    cfg.dt = 1e-3;
    cfg.record_stride = 100;
    cfg.seed = 4;
    const auto a = langevin::spde_evolve(spec, Eigen::VectorXd::Zero(spec.M), cfg);
    const auto b = langevin::spde_evolve(spec, Eigen::VectorXd::Zero(spec.M), cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise variance is dt/dx per node") {
    SPDESpec spec;
    spec.a = 1.2;
    spec.M = 16;
    const double dt = 2e-3;
    auto rng = make_rng(99);
    std::vector<double> sq;
    for (int s = 0; s < 4000; ++s) {
        const Eigen::VectorXd xi = langevin::spde_noise(spec, dt, rng);
        for (int i = 0; i < spec.M; ++i) sq.push_back(xi(i) * xi(i));
    }
    const auto v = batch_means(sq);
    CHECK(std::abs(v.mean - dt / spec.dx()) <= 3.0 * v.stderr_);
}

TEST_CASE("zero-noise diagnostic: modes decay at rate mu_k / 2") {
    SPDESpec spec;
    spec.a = std::numbers::pi / 2.0; // domain length pi
    spec.M = 16;
    SPDERunConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 2e-4;
    cfg.record_stride = std::lround(cfg.T / cfg.dt); // final snapshot only
    cfg.noise_amp = 0.0;
    Eigen::VectorXd U0 = Eigen::VectorXd::Zero(spec.M);
    for (int m = 1; m <= 3; ++m) U0 += langevin::spde_mode(spec, m);

    const auto snaps = langevin::spde_evolve(spec, U0, cfg);
    REQUIRE(!snaps.empty());
    const Eigen::VectorXd& Ut = snaps.back();
    for (int m = 1; m <= 3; ++m) {
        const double c = langevin::spde_mode_coefficient(spec, Ut, m);
        const double exact = std::exp(-0.5 * spec.dirichlet_eigenvalue(m) * cfg.T);
        CHECK(std::abs(c - exact) <= 0.01 * exact);
    }
}

TEST_CASE("linear stationary mode variances equal 1/mu_k") {
    SPDESpec spec;
    spec.a = std::numbers::pi / 2.0;
    spec.M = 16;
    SPDERunConfig cfg;
    cfg.T = 1200.0;
    cfg.dt = 1e-3;
    cfg.burn_in_time = 30.0;
    cfg.record_stride = 20;
    cfg.seed = 7;
    std::vector<std::vector<double>> sq(4);
    langevin::spde_run(spec, Eigen::VectorXd::Zero(spec.M), cfg,
                       [&](double, const Eigen::VectorXd& U) {
                           for (int m = 1; m <= 4; ++m) {
                               const double c = langevin::spde_mode_coefficient(spec, U, m);
                               sq[static_cast<std::size_t>(m - 1)].push_back(c * c);
                           }
                       });
    for (int m = 1; m <= 4; ++m) {
        const auto v = batch_means(sq[static_cast<std::size_t>(m - 1)]);
        const double exact = 1.0 / spec.dirichlet_eigenvalue(m);
        CHECK(std::abs(v.mean - exact) <= 3.0 * v.stderr_ + 0.01 * exact);
    }
}

TEST_CASE("lattice invariant measure: gaussian cases have exact covariances") {
    SPDESpec spec;
    spec.a = 1.0;
    spec.M = 10;

    // lambda = 0: pure chain stiffness
    const auto g0 = langevin::lattice_invariant_measure(spec);
    CHECK(g0.potential.kind == gibbs::PotentialSpec::Kind::none);
    const Eigen::MatrixXd C0 =
        g0.A.entries().llt().solve(Eigen::MatrixXd::Identity(spec.M, spec.M));

    // SDE moments at a probe node match the exact inverse
    SPDERunConfig cfg;
    cfg.T = 600.0;
    cfg.dt = 1e-3;
    cfg.burn_in_time = 20.0;
    cfg.record_stride = 20;
    cfg.seed = 13;
    std::vector<double> u2;
    const int probe = spec.M / 2;
    langevin::spde_run(spec, Eigen::VectorXd::Zero(spec.M), cfg,
                       [&](double, const Eigen::VectorXd& U) { u2.push_back(U(probe) * U(probe)); });
    const auto v = batch_means(u2);
    CHECK(std::abs(v.mean - C0(probe, probe)) <= 3.0 * v.stderr_ + 0.01 * C0(probe, probe));

    // lambda_1 > 0 shifts the quadratic form: A + 2 lambda_1 dx I
    SPDESpec spec1 = spec;
    spec1.lambda_odd = {0.8};
    const auto g1 = langevin::lattice_invariant_measure(spec1);
    const Eigen::MatrixXd expected =
        gibbs::chain_stiffness(spec.M, spec.dx()) +
        2.0 * 0.8 * spec.dx() * Eigen::MatrixXd::Identity(spec.M, spec.M);
    CHECK((g1.A.entries() - expected).cwiseAbs().maxCoeff() <= 1e-14);

    SPDESpec bad = spec;
    bad.lambda_odd = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(langevin::lattice_invariant_measure(bad), validation_error);
}

TEST_CASE("nonlinear stationary law: SDE moments match the MCMC lattice density") {
    SPDESpec spec;
    spec.a = std::numbers::pi / 2.0;
    spec.M = 12;
    spec.lambda_odd = {0.0, 1.0}; // cubic drift, quartic potential

    SPDERunConfig cfg;
    cfg.T = 800.0;
    cfg.dt = 1e-3;
    cfg.burn_in_time = 30.0;
    cfg.record_stride = 20;
    cfg.seed = 5;

    gibbs::MCMCConfig mc;
    mc.n_samples = 30000;
    mc.burn_in = 3000;
    mc.thinning = 4;
    mc.seed = 6;

    const auto rep = langevin::spde_stationary_check(spec, cfg, mc, {3, 6, 9});
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.all_within(3.5));
}

} // TEST_SUITE
