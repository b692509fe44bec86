#include "ergokit/spde.hpp"

#include <cmath>
#include <numbers>

#include "ergokit/kernels.hpp"
#include "ergokit/rng.hpp"

namespace ergokit::langevin {

namespace {
constexpr double kDivergenceBound = 1e8;
}

double SPDESpec::dirichlet_eigenvalue(int m) const {
    if (m < 1 || m > M) throw validation_error("dirichlet_eigenvalue: m out of range");
    const double s = std::sin(m * std::numbers::pi / (2.0 * (M + 1.0)));
    return 4.0 / (dx() * dx()) * s * s;
}

void SPDESpec::validate() const {
    if (!(a > 0.0)) throw validation_error("SPDESpec: a must be positive");
    if (M < 1) throw validation_error("SPDESpec: M must be >= 1");
    for (double l : lambda_odd)
        if (l < 0.0) throw validation_error("SPDESpec: lambda coefficients must be >= 0");
}

Eigen::VectorXd spde_mode(const SPDESpec& spec, int m) {
    if (m < 1 || m > spec.M) throw validation_error("spde_mode: m out of range");
    Eigen::VectorXd v(spec.M);
    const double c = std::sqrt(2.0 / ((spec.M + 1.0) * spec.dx()));
    for (int i = 0; i < spec.M; ++i)
        v(i) = c * std::sin((i + 1.0) * m * std::numbers::pi / (spec.M + 1.0));
    return v;
}

double spde_mode_coefficient(const SPDESpec& spec, const Eigen::VectorXd& U, int m) {
    return spec.dx() * spde_mode(spec, m).dot(U);
}

Eigen::VectorXd spde_noise(const SPDESpec& spec, double dt, std::mt19937_64& rng,
                           double noise_amp) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double amp = noise_amp * std::sqrt(dt / spec.dx());
    Eigen::VectorXd xi(spec.M);
    for (int i = 0; i < spec.M; ++i) xi(i) = amp * gauss(rng);
    return xi;
}

void spde_run(const SPDESpec& spec, const Eigen::VectorXd& U0, const SPDERunConfig& cfg,
              const std::function<void(double, const Eigen::VectorXd&)>& visit) {
    spec.validate();
    if (U0.size() != spec.M) throw validation_error("spde_run: U0 size != M");
    if (!(cfg.dt > 0.0) || !(cfg.T > 0.0)) throw validation_error("spde_run: need T, dt > 0");

    const int M = spec.M;
    const double dx = spec.dx();

    // I + (dt/2) (-Lap_h), prefactored once.
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(M, M) +
                          (cfg.dt / (2.0 * dx * dx)) * gibbs::second_difference_1d(M);
    Eigen::LLT<Eigen::MatrixXd> solver(lhs);
    if (solver.info() != Eigen::Success)
        throw numerical_error("spde_run: implicit operator factorization failed");

    std::vector<double> coeff;
    std::vector<unsigned> expo;
    for (std::size_t i = 0; i < spec.lambda_odd.size(); ++i) {
        if (spec.lambda_odd[i] != 0.0) {
            coeff.push_back(spec.lambda_odd[i]);
            expo.push_back(static_cast<unsigned>(2 * i + 1));
        }
    }

    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double amp = cfg.noise_amp * std::sqrt(cfg.dt / dx);

    const long nburn = std::lround(cfg.burn_in_time / cfg.dt);
    const long nsteps = std::lround(cfg.T / cfg.dt);
    long stride = cfg.record_stride < 1 ? 1 : cfg.record_stride;

    Eigen::VectorXd U = U0;
    Eigen::VectorXd rhs(M), drift(M);
    for (long s = 0; s < nburn + nsteps; ++s) {
        rhs = U;
        if (!coeff.empty()) {
            kernels::poly_terms(U.data(), drift.data(), static_cast<std::size_t>(M),
                                coeff.data(), expo.data(), coeff.size());
            rhs -= cfg.dt * drift;
        }
        if (cfg.noise_amp != 0.0)
            for (int i = 0; i < M; ++i) rhs(i) += amp * gauss(rng);
        U = solver.solve(rhs);
        for (int i = 0; i < M; ++i)
            if (!std::isfinite(U(i)) || std::abs(U(i)) > kDivergenceBound)
                throw trajectory_diverged("spde_run: field diverged");
        if (s >= nburn && (s - nburn + 1) % stride == 0 && visit)
            visit((s + 1) * cfg.dt, U);
    }
}

std::vector<Eigen::VectorXd> spde_evolve(const SPDESpec& spec, const Eigen::VectorXd& U0,
                                         const SPDERunConfig& cfg) {
    std::vector<Eigen::VectorXd> out;
    spde_run(spec, U0, cfg, [&](double, const Eigen::VectorXd& U) { out.push_back(U); });
    return out;
}

gibbs::GibbsSpec lattice_invariant_measure(const SPDESpec& spec) {
    spec.validate();
    const double dx = spec.dx();
    Eigen::MatrixXd A = gibbs::chain_stiffness(spec.M, dx);
    if (!spec.lambda_odd.empty() && spec.lambda_odd[0] != 0.0)
        A += 2.0 * spec.lambda_odd[0] * dx * Eigen::MatrixXd::Identity(spec.M, spec.M);

    gibbs::PotentialSpec pot = gibbs::PotentialSpec::none();
    int nonlinear_terms = 0;
    for (std::size_t i = 1; i < spec.lambda_odd.size(); ++i) {
        if (spec.lambda_odd[i] == 0.0) continue;
        ++nonlinear_terms;
        // 2 dx lambda_j U^{j+1}/(j+1) == (g/2k) dx U^{2k} with 2k = j+1, g = 2 lambda_j
        pot = gibbs::PotentialSpec::polynomial_even(2.0 * spec.lambda_odd[i],
                                                    static_cast<int>(i) + 1);
    }
    if (nonlinear_terms > 1)
        throw validation_error(
            "lattice_invariant_measure: at most one nonlinear lambda term is supported");
    return gibbs::GibbsSpec{gibbs::StiffnessMatrix(A), pot, 1.0, dx};
}

SPDEStationaryReport spde_stationary_check(const SPDESpec& spec, const SPDERunConfig& cfg,
                                           const gibbs::MCMCConfig& mcmc_cfg,
                                           const std::vector<int>& probe_nodes) {
    spec.validate();
    for (int node : probe_nodes)
        if (node < 0 || node >= spec.M)
            throw validation_error("spde_stationary_check: probe node out of range");

    // SDE side: per-node moment series.
    std::vector<std::vector<double>> m2(probe_nodes.size()), m4(probe_nodes.size());
    spde_run(spec, Eigen::VectorXd::Zero(spec.M), cfg,
             [&](double, const Eigen::VectorXd& U) {
                 for (std::size_t p = 0; p < probe_nodes.size(); ++p) {
                     const double u = U(probe_nodes[p]);
                     m2[p].push_back(u * u);
                     m4[p].push_back(u * u * u * u);
                 }
             });

    // MCMC side on the detailed-balance lattice density.
    const gibbs::GibbsSpec target = lattice_invariant_measure(spec);
    const gibbs::SampleBatch batch = gibbs::mcmc_sample(target, mcmc_cfg);

    SPDEStationaryReport rep;
    for (std::size_t p = 0; p < probe_nodes.size(); ++p) {
        std::vector<double> g2(static_cast<std::size_t>(batch.draws.rows()));
        std::vector<double> g4(g2.size());
        for (Eigen::Index s = 0; s < batch.draws.rows(); ++s) {
            const double u = batch.draws(s, probe_nodes[p]);
            g2[static_cast<std::size_t>(s)] = u * u;
            g4[static_cast<std::size_t>(s)] = u * u * u * u;
        }
        rep.rows.push_back({probe_nodes[p], 2, batch_means(m2[p]), batch_means(g2)});
        rep.rows.push_back({probe_nodes[p], 4, batch_means(m4[p]), batch_means(g4)});
    }
    return rep;
}

} // namespace ergokit::langevin
