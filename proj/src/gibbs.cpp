#include "ergokit/gibbs.hpp"

#include <cmath>

#include "ergokit/kernels.hpp"
#include "ergokit/rng.hpp"

namespace ergokit::gibbs {

namespace {

void require_dim(const GibbsSpec& spec, const Eigen::VectorXd& q, const char* what) {
    if (q.size() != spec.dim())
        throw validation_error(std::string(what) + ": dimension mismatch");
}

// Simpson on [lo, hi] with n (even) subintervals.
template <typename F>
double simpson(F&& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

// Half-width where the density has decayed by ~e^{-60} relative to the origin.
double density_range(const GibbsSpec& spec, int coord) {
    const double l0 = log_density(spec, Eigen::VectorXd::Zero(spec.dim()));
    double L = 0.5;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(spec.dim());
    for (int iter = 0; iter < 200; ++iter) {
        q(coord) = L;
        const double lp = log_density(spec, q);
        q(coord) = -L;
        const double lm = log_density(spec, q);
        if (std::max(lp, lm) < l0 - 60.0) return L;
        L *= 1.5;
    }
    throw numerical_error("expectation: density does not decay (non-confining potential?)");
}

} // namespace

StiffnessMatrix::StiffnessMatrix(Eigen::MatrixXd entries, double sym_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw validation_error("StiffnessMatrix: matrix must be square and non-empty");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
        throw validation_error("StiffnessMatrix: not symmetric");
}

Eigen::MatrixXd second_difference_1d(int N) {
    if (N < 1) throw validation_error("second_difference_1d: N must be >= 1");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        T(i, i) = 2.0;
        if (i > 0) T(i, i - 1) = -1.0;
        if (i + 1 < N) T(i, i + 1) = -1.0;
    }
    return T;
}

Eigen::MatrixXd five_point_2d(int nx, int ny) {
    if (nx < 1 || ny < 1) throw validation_error("five_point_2d: grid must be >= 1x1");
    const int n = nx * ny;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    auto idx = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int r = idx(i, j);
            A(r, r) = 4.0;
            if (i > 0) A(r, idx(i - 1, j)) = -1.0;
            if (i + 1 < nx) A(r, idx(i + 1, j)) = -1.0;
            if (j > 0) A(r, idx(i, j - 1)) = -1.0;
            if (j + 1 < ny) A(r, idx(i, j + 1)) = -1.0;
        }
    }
    return A;
}

Eigen::MatrixXd biharmonic_1d(int N) {
    const Eigen::MatrixXd T = second_difference_1d(N);
    return T * T;
}

Eigen::MatrixXd chain_stiffness(int N, double dx) {
    if (!(dx > 0.0)) throw validation_error("chain_stiffness: dx must be positive");
    return second_difference_1d(N) / dx;
}

PotentialSpec PotentialSpec::polynomial_even(double g, int k) {
    PotentialSpec p;
    p.kind = Kind::polynomial_even;
    p.g = g;
    p.k = k;
    p.validate();
    return p;
}

PotentialSpec PotentialSpec::lipschitz_sine(double amp, double freq) {
    PotentialSpec p;
    p.kind = Kind::lipschitz;
    p.name = LipschitzName::sine;
    p.amp = amp;
    p.freq = freq;
    p.lipschitz_constant = std::abs(amp * freq);
    return p;
}

PotentialSpec PotentialSpec::lipschitz_linear(double c) {
    PotentialSpec p;
    p.kind = Kind::lipschitz;
    p.name = LipschitzName::linear;
    p.amp = c;
    p.lipschitz_constant = std::abs(c);
    return p;
}

double PotentialSpec::value(double z) const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::polynomial_even: return 0.0; // handled in bulk by potential_total
        case Kind::lipschitz:
            return name == LipschitzName::sine ? amp * std::sin(freq * z) : amp * z;
    }
    return 0.0;
}

double PotentialSpec::deriv(double z) const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::polynomial_even: return 0.0;
        case Kind::lipschitz:
            return name == LipschitzName::sine ? amp * freq * std::cos(freq * z) : amp;
    }
    return 0.0;
}

double PotentialSpec::deriv2(double z) const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::polynomial_even: return 0.0;
        case Kind::lipschitz:
            return name == LipschitzName::sine ? -amp * freq * freq * std::sin(freq * z) : 0.0;
    }
    return 0.0;
}

void PotentialSpec::validate() const {
    if (kind == Kind::polynomial_even) {
        if (g < 0.0) throw validation_error("PotentialSpec: polynomial g must be >= 0");
        if (k < 1) throw validation_error("PotentialSpec: polynomial k must be >= 1");
    }
    if (kind == Kind::lipschitz && !std::isfinite(lipschitz_constant))
        throw validation_error("PotentialSpec: lipschitz kind needs a finite constant");
}

void GibbsSpec::validate() const {
    potential.validate();
    if (!(beta > 0.0)) throw validation_error("GibbsSpec: beta must be positive");
    if (!(dx > 0.0)) throw validation_error("GibbsSpec: dx must be positive");
}

void MCMCConfig::validate() const {
    if (n_samples < 1) throw validation_error("MCMCConfig: n_samples must be >= 1");
    if (burn_in < 0) throw validation_error("MCMCConfig: burn_in must be >= 0");
    if (thinning < 1) throw validation_error("MCMCConfig: thinning must be >= 1");
    if (!(step_scale > 0.0)) throw validation_error("MCMCConfig: step_scale must be positive");
}

double potential_total(const GibbsSpec& spec, const Eigen::VectorXd& q) {
    require_dim(spec, q, "potential_total");
    switch (spec.potential.kind) {
        case PotentialSpec::Kind::none: return 0.0;
        case PotentialSpec::Kind::polynomial_even:
            return spec.potential.g / (2.0 * spec.potential.k) * spec.dx *
                   kernels::pow_sum(q.data(), static_cast<std::size_t>(q.size()),
                                    static_cast<unsigned>(2 * spec.potential.k));
        case PotentialSpec::Kind::lipschitz: {
            double s = 0.0;
            for (Eigen::Index i = 0; i < q.size(); ++i) s += spec.potential.value(q(i));
            return spec.dx * s;
        }
    }
    return 0.0;
}

Eigen::VectorXd potential_grad(const GibbsSpec& spec, const Eigen::VectorXd& q) {
    require_dim(spec, q, "potential_grad");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(q.size());
    switch (spec.potential.kind) {
        case PotentialSpec::Kind::none: break;
        case PotentialSpec::Kind::polynomial_even:
            kernels::pow_elem(q.data(), g.data(), static_cast<std::size_t>(q.size()),
                              static_cast<unsigned>(2 * spec.potential.k - 1));
            g *= spec.potential.g * spec.dx;
            break;
        case PotentialSpec::Kind::lipschitz:
            for (Eigen::Index i = 0; i < q.size(); ++i)
                g(i) = spec.dx * spec.potential.deriv(q(i));
            break;
    }
    return g;
}

Eigen::VectorXd potential_hess_diag(const GibbsSpec& spec, const Eigen::VectorXd& q) {
    require_dim(spec, q, "potential_hess_diag");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(q.size());
    switch (spec.potential.kind) {
        case PotentialSpec::Kind::none: break;
        case PotentialSpec::Kind::polynomial_even: {
            const int k = spec.potential.k;
            if (2 * k - 2 > 0)
                kernels::pow_elem(q.data(), h.data(), static_cast<std::size_t>(q.size()),
                                  static_cast<unsigned>(2 * k - 2));
            else
                h.setOnes();
            h *= spec.potential.g * (2.0 * k - 1.0) * spec.dx;
            break;
        }
        case PotentialSpec::Kind::lipschitz:
            for (Eigen::Index i = 0; i < q.size(); ++i)
                h(i) = spec.dx * spec.potential.deriv2(q(i));
            break;
    }
    return h;
}

double log_density(const GibbsSpec& spec, const Eigen::VectorXd& q) {
    spec.validate();
    require_dim(spec, q, "log_density");
    const double quad = 0.5 * q.dot(spec.A.entries() * q);
    return -spec.beta * (quad + potential_total(spec, q));
}

double coercivity_constant(const StiffnessMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.entries());
    if (es.info() != Eigen::Success)
        throw numerical_error("coercivity_constant: eigensolver failed");
    const double lmin = es.eigenvalues()(0);
    if (!(lmin > 0.0))
        throw not_coercive("coercivity_constant: smallest eigenvalue " + std::to_string(lmin) +
                           " is not positive");
    return lmin;
}

SampleBatch mcmc_sample(const GibbsSpec& spec, const MCMCConfig& cfg,
                        std::vector<ProposalRecord>* record) {
    spec.validate();
    cfg.validate();
    const int n = spec.dim();
    const Eigen::MatrixXd& A = spec.A.entries();

    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd Aq = Eigen::VectorXd::Zero(n);
    double scale = cfg.step_scale;

    // Potential increment when site i moves by e.
    auto delta_potential = [&](double zi, double e) -> double {
        switch (spec.potential.kind) {
            case PotentialSpec::Kind::none: return 0.0;
            case PotentialSpec::Kind::polynomial_even: {
                const unsigned m = static_cast<unsigned>(2 * spec.potential.k);
                auto powm = [m](double z) {
                    double r = 1.0, b = z;
                    for (unsigned mm = m; mm != 0; mm >>= 1u) {
                        if (mm & 1u) r *= b;
                        b *= b;
                    }
                    return r;
                };
                return spec.potential.g / (2.0 * spec.potential.k) * spec.dx *
                       (powm(zi + e) - powm(zi));
            }
            case PotentialSpec::Kind::lipschitz:
                return spec.dx * (spec.potential.value(zi + e) - spec.potential.value(zi));
        }
        return 0.0;
    };

    long accepted = 0, attempted = 0;
    long win_accepted = 0, win_attempted = 0;
    const long adapt_window = 50;
    bool recording = false;

    auto sweep = [&](bool adapting, long sweep_index) {
        for (int i = 0; i < n; ++i) {
            const double e = scale * gauss(rng);
            const double dlog =
                -spec.beta * (Aq(i) * e + 0.5 * A(i, i) * e * e + delta_potential(q(i), e));
            ++attempted;
            ++win_attempted;
            bool accept = dlog >= 0.0;
            if (!accept) accept = std::log(unif(rng)) < dlog;
            if (recording) record->push_back({i, q(i), q(i) + e, dlog, accept});
            if (accept) {
                q(i) += e;
                Aq += e * A.col(i);
                ++accepted;
                ++win_accepted;
            }
        }
        if (adapting && (sweep_index + 1) % adapt_window == 0 && win_attempted > 0) {
            const double rate = static_cast<double>(win_accepted) / win_attempted;
            scale *= std::exp(0.66 * (rate - 0.3));
            scale = std::clamp(scale, 1e-8, 1e8);
            win_accepted = win_attempted = 0;
        }
        if ((sweep_index + 1) % 1024 == 0) Aq = A * q; // refresh the running product
    };

    recording = record != nullptr;
    for (long s = 0; s < cfg.burn_in; ++s) sweep(true, s);
    accepted = attempted = 0;

    SampleBatch batch;
    batch.draws.resize(cfg.n_samples, n);
    for (long s = 0; s < cfg.n_samples; ++s) {
        for (long t = 0; t < cfg.thinning; ++t) sweep(false, cfg.burn_in + s * cfg.thinning + t);
        batch.draws.row(s) = q.transpose();
    }
    batch.acceptance_rate =
        attempted > 0 ? static_cast<double>(accepted) / static_cast<double>(attempted) : 0.0;
    batch.step_scale_final = scale;
    return batch;
}

EstimateWithError expectation(const GibbsSpec& spec, const ObservableSpec& F,
                              const MCMCConfig& cfg, EstimateMethod method) {
    spec.validate();
    if (F.kind == ObservableSpec::Kind::energy)
        throw validation_error("expectation: energy observable is not configuration-only");

    if (method == EstimateMethod::quadrature) {
        const int n = spec.dim();
        if (n > 2)
            throw validation_error("expectation: quadrature oracle only available for dim <= 2");
        auto weight = [&](const Eigen::VectorXd& q) { return std::exp(log_density(spec, q)); };
        auto fval = [&](const Eigen::VectorXd& q) {
            std::vector<double> qq(q.data(), q.data() + q.size());
            return evaluate_config_observable(F, qq, spec.dx);
        };
        EstimateWithError e;
        e.method = EstimateMethod::quadrature;
        if (n == 1) {
            const double L = density_range(spec, 0);
            auto run = [&](int pts) {
                Eigen::VectorXd q(1);
                double zn = simpson([&](double x) { q(0) = x; return weight(q); }, -L, L, pts);
                double zf = simpson([&](double x) { q(0) = x; return weight(q) * fval(q); }, -L, L, pts);
                return zf / zn;
            };
            const double coarse = run(2048);
            const double fine = run(4096);
            e.mean = fine;
            e.stderr_ = std::abs(fine - coarse);
            e.n_effective = 4096;
        } else {
            const double Lx = density_range(spec, 0);
            const double Ly = density_range(spec, 1);
            auto run = [&](int pts) {
                Eigen::VectorXd q(2);
                auto inner = [&](double x, auto&& f2) {
                    return simpson([&](double y) { q(0) = x; q(1) = y; return f2(q); }, -Ly, Ly, pts);
                };
                double zn = simpson([&](double x) { return inner(x, weight); }, -Lx, Lx, pts);
                double zf = simpson(
                    [&](double x) {
                        return inner(x, [&](const Eigen::VectorXd& qq) { return weight(qq) * fval(qq); });
                    },
                    -Lx, Lx, pts);
                return zf / zn;
            };
            const double coarse = run(256);
            const double fine = run(512);
            e.mean = fine;
            e.stderr_ = std::abs(fine - coarse);
            e.n_effective = 512.0 * 512.0;
        }
        return e;
    }

    const SampleBatch batch = mcmc_sample(spec, cfg);
    std::vector<double> vals(static_cast<std::size_t>(batch.draws.rows()));
    std::vector<double> row(static_cast<std::size_t>(spec.dim()));
    for (Eigen::Index s = 0; s < batch.draws.rows(); ++s) {
        for (int i = 0; i < spec.dim(); ++i) row[static_cast<std::size_t>(i)] = batch.draws(s, i);
        vals[static_cast<std::size_t>(s)] = evaluate_config_observable(F, row, spec.dx);
    }
    return batch_means(vals);
}

Eigen::MatrixXd gaussian_samples(const GibbsSpec& spec, std::int64_t n, std::uint64_t seed) {
    spec.validate();
    Eigen::LLT<Eigen::MatrixXd> llt(spec.beta * spec.A.entries());
    if (llt.info() != Eigen::Success)
        throw not_coercive("gaussian_samples: beta*A is not positive definite");
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = spec.dim();
    Eigen::MatrixXd out(n, d);
    Eigen::VectorXd xi(d);
    for (std::int64_t s = 0; s < n; ++s) {
        for (int i = 0; i < d; ++i) xi(i) = gauss(rng);
        // phi = L^{-T} xi has covariance (beta A)^{-1}
        out.row(s) = llt.matrixU().solve(xi).transpose();
    }
    return out;
}

LipschitzWeightReport lipschitz_weight_check(const GibbsSpec& spec, const MCMCConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (spec.potential.kind != PotentialSpec::Kind::lipschitz)
        throw validation_error("lipschitz_weight_check: potential kind must be lipschitz");

    const Eigen::MatrixXd draws = gaussian_samples(spec, cfg.n_samples, cfg.seed);
    LipschitzWeightReport rep;

    std::vector<double> weights(static_cast<std::size_t>(draws.rows()));
    for (Eigen::Index s = 0; s < draws.rows(); ++s) {
        const Eigen::VectorXd q = draws.row(s).transpose();
        const double w = std::exp(-spec.beta * potential_total(spec, q));
        if (!std::isfinite(w)) rep.all_weights_finite = false;
        weights[static_cast<std::size_t>(s)] = w;
    }
    rep.gaussian_mean_weight = batch_means(weights);

    const double L = spec.potential.lipschitz_constant;
    long ok = 0, total = 0;
    for (Eigen::Index s = 0; s + 1 < draws.rows(); ++s) {
        bool pair_ok = true;
        for (int i = 0; i < spec.dim(); ++i) {
            const double z = draws(s, i), zp = draws(s + 1, i);
            const double dg = std::abs(spec.potential.value(z) - spec.potential.value(zp));
            if (dg > L * std::abs(z - zp) + 1e-12) {
                pair_ok = false;
                break;
            }
        }
        ok += pair_ok ? 1 : 0;
        ++total;
    }
    rep.lipschitz_fraction = total > 0 ? static_cast<double>(ok) / total : 1.0;
    return rep;
}

} // namespace ergokit::gibbs
