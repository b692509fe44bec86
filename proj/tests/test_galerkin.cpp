#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergokit/galerkin.hpp"
#include "oracles.hpp"

using namespace ergokit;
using galerkin::GalerkinSpec;
using galerkin::GalerkinSystem;
using galerkin::ModeState;

namespace {

double smooth_profile(double x, double a) { return (a * a - x * x) / (a * a); }

} // namespace

TEST_SUITE("galerkin") {

TEST_CASE("rhs: zero state, diagonal linear part, sin^4 projection") {
    GalerkinSpec spec = GalerkinSpec::single_term(6, 1.3, 1.0, 2); // cubic term
    GalerkinSystem sys(spec);

    CHECK(sys.rhs(Eigen::VectorXd::Zero(6)).norm() == 0.0);

    // linear single mode: acc = -mu_m u_m exactly
    GalerkinSpec lin = GalerkinSpec::single_term(6, 1.3, 0.0, 1);
    GalerkinSystem lsys(lin);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(6);
    u(2) = 0.8;
    const Eigen::VectorXd acc = lsys.rhs(u);
    for (int m = 1; m <= 6; ++m)
        CHECK(acc(m - 1) ==
              doctest::Approx(-lin.mode_eigenvalue(m) * u(m - 1)).epsilon(1e-14));

    // cubic single-mode projection: <(u phi_1)^3, phi_1> = u^3 * 3/(4a)
    Eigen::VectorXd u1 = Eigen::VectorXd::Zero(6);
    const double amp = 0.7;
    u1(0) = amp;
    const Eigen::VectorXd proj = sys.nonlinear_projection(u1, false);
    const double expected = amp * amp * amp * 3.0 / (4.0 * spec.a);
    CHECK(proj(0) == doctest::Approx(expected).epsilon(1e-12));

    // oversampled quadrature does not move the projection (dealiasing holds)
    const Eigen::VectorXd proj2 = sys.nonlinear_projection(u1, true);
    CHECK((proj - proj2).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("integration: harmonic mode, zero data, dt^2 self-convergence") {
    GalerkinSpec lin = GalerkinSpec::single_term(4, 1.0, 0.0, 1);
    GalerkinSystem sys(lin);

    // single mode: u(t) = u0 cos(sqrt(mu) t)
    auto mode_error = [&](double dt) {
        Eigen::VectorXd u0 = Eigen::VectorXd::Zero(4);
        u0(1) = 1.0;
        const double T = 3.0;
        const ModeState end = galerkin::integrate_to(sys, u0, T, dt);
        const double exact = std::cos(std::sqrt(lin.mode_eigenvalue(2)) * T);
        return std::abs(end.u(1) - exact);
    };
    const double e1 = mode_error(2e-3);
    const double e2 = mode_error(1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));

    // zero initial data stays zero
    GalerkinSpec nl = GalerkinSpec::single_term(4, 1.0, 1.0, 2);
    GalerkinSystem nsys(nl);
    const ModeState z = galerkin::integrate_to(nsys, Eigen::VectorXd::Zero(4), 1.0, 1e-3);
    CHECK(z.u.norm() == 0.0);
    CHECK(z.v.norm() == 0.0);

    // energy drift halves like dt^2
    auto drift = [&](double dt) {
        const Eigen::VectorXd u0 = nsys.project([&](double x) { return smooth_profile(x, 1.0); });
        double e0 = -1.0, worst = 0.0;
        galerkin::integrate_wave(nsys, u0, 2.0, dt, [&](const ModeState& s) {
            const double e = nsys.energy(s);
            if (e0 < 0.0) e0 = e;
            worst = std::max(worst, std::abs(e - e0) / e0);
        });
        return worst;
    };
    const double d1 = drift(2e-3);
    const double d2 = drift(1e-3);
    CHECK(d1 / d2 >= 3.2);
    CHECK(d1 / d2 <= 4.8);
}

TEST_CASE("a priori bound: conserved functional never exceeds its initial value") {
    GalerkinSpec spec = GalerkinSpec::single_term(8, 1.0, 1.0, 2);
    GalerkinSystem sys(spec);
    const Eigen::VectorXd u0 = sys.project([&](double x) { return smooth_profile(x, 1.0); });
    double e0 = -1.0, max_ratio = 0.0;
    galerkin::integrate_wave(sys, u0, 3.0, 1e-4, [&](const ModeState& s) {
        const double e = sys.energy(s);
        if (e0 < 0.0) e0 = e;
        max_ratio = std::max(max_ratio, e / e0);
    });
    CHECK(max_ratio <= 1.0 + 1e-6);
}

TEST_CASE("convergence study over mode counts") {
    // linear problem, first-mode data: every n resolves it exactly
    GalerkinSpec lin = GalerkinSpec::single_term(2, 1.0, 0.0, 1);
    const auto rows_lin = galerkin::convergence_study(
        lin, {2, 4, 8},
        [&](double x) { return std::sin(std::numbers::pi * (x + 1.0) / 2.0); }, 1.0, 1e-3);
    for (const auto& r : rows_lin) CHECK(r.l2_difference <= 1e-9);

    // smooth data, cubic nonlinearity: strictly decreasing differences
    GalerkinSpec nl = GalerkinSpec::single_term(8, 1.0, 1.0, 2);
    const auto rows = galerkin::convergence_study(
        nl, {8, 16, 32}, [&](double x) { return smooth_profile(x, 1.0); }, 1.0, 5e-4);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].l2_difference < rows[0].l2_difference);

    // rougher data still converges monotonically
    const auto rough = galerkin::convergence_study(
        nl, {8, 16, 32},
        [&](double x) {
            double s = 0.0;
            for (int m = 1; m <= 7; ++m)
                s += std::sin(m * std::numbers::pi * (x + 1.0) / 2.0) / (m * m);
            return s;
        },
        1.0, 5e-4);
    CHECK(rough[1].l2_difference < rough[0].l2_difference);
}

TEST_CASE("gronwall envelope") {
    GalerkinSpec spec = GalerkinSpec::single_term(8, 1.0, 1.0, 2);
    auto U0 = [](double x) { return smooth_profile(x, 1.0); };

    // delta = 0: exact uniqueness
    const auto r0 = galerkin::gronwall_stability_check(spec, U0, 0.0, 1.0, 1e-3);
    CHECK(r0.exact_uniqueness);
    CHECK(r0.sup_ratio == 0.0);

    // linear problem: the energy seminorm is conserved, the M = 0 envelope binds
    GalerkinSpec lin = GalerkinSpec::single_term(8, 1.0, 0.0, 1);
    const auto rl = galerkin::gronwall_stability_check(lin, U0, 1e-4, 3.0, 1e-4);
    CHECK(rl.M == 0.0);
    CHECK(rl.sup_ratio <= 1.0 + 1e-4);
    CHECK(rl.sup_ratio >= 1.0 - 1e-4); // equality up to integrator error

    // cubic perturbation pair stays under the measured-M envelope
    const auto rc = galerkin::gronwall_stability_check(spec, U0, 1e-6, 5.0, 5e-4);
    CHECK(rc.M > 0.0);
    CHECK(rc.sup_ratio <= 1.05);
}

TEST_CASE("holder interpolation") {
    // constant field: equality at every admissible q
    std::vector<double> constant(64, 0.7);
    const auto c = galerkin::holder_interpolation_check(constant, 0.03, 3.0, 2);
    CHECK(c.pass);
    CHECK(std::abs(c.slack) <= 1e-12);

    // q = 2: theta = 0, the inequality is an identity
    const auto ends = galerkin::holder_interpolation_check(constant, 0.03, 2.0, 2);
    CHECK(ends.theta == 0.0);
    CHECK(ends.pass);

    // 1000 seeded random smooth fields, k = 2, q = 3
    for (int c2 = 0; c2 < 1000; ++c2) {
        const auto f = oracles::random_smooth_field(128, 1.0, 9, 4000 + c2);
        const auto h = galerkin::holder_interpolation_check(f, 2.0 / 128, 3.0, 2);
        CHECK(h.pass);
    }

    CHECK_THROWS_AS(galerkin::holder_interpolation_check(constant, 0.03, 1.5, 2),
                    validation_error);
    CHECK_THROWS_AS(galerkin::holder_interpolation_check(constant, 0.03, 5.0, 2),
                    validation_error);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GalerkinSpec::single_term(0, 1.0, 1.0, 1), validation_error);
    CHECK_THROWS_AS(GalerkinSpec::single_term(4, 1.0, -1.0, 1), validation_error);
    GalerkinSpec even;
    even.n = 4;
    even.a = 1.0;
    even.terms.push_back({1.0, 2}); // even exponent
    CHECK_THROWS_AS(even.validate(), validation_error);
    GalerkinSpec under = GalerkinSpec::single_term(8, 1.0, 1.0, 2);
    under.quad_points = 8; // below 2 * 3 * 8
    CHECK_THROWS_AS(under.validate(), validation_error);
}

} // TEST_SUITE
