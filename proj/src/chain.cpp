#include "ergokit/chain.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ergokit/kernels.hpp"

namespace ergokit::chain {

namespace {

constexpr double kDivergenceBound = 1e8;

void check_state(const ChainState& s, const ChainParams& prm, const char* what) {
    if (s.q.size() != static_cast<std::size_t>(prm.N) ||
        s.p.size() != static_cast<std::size_t>(prm.N))
        throw validation_error(std::string(what) + ": state size does not match N");
}

void check_bounded(const ChainState& s) {
    for (double v : s.q) {
        if (!std::isfinite(v) || std::abs(v) > kDivergenceBound)
            throw trajectory_diverged("chain trajectory diverged (|q| > 1e8 or non-finite)");
    }
}

// dp/dt at fixed q (conservative part).
void force(const std::vector<double>& q, const ChainParams& prm, std::vector<double>& f) {
    const double inv_dx2 = 1.0 / (prm.dx() * prm.dx());
    kernels::chain_force(q.data(), f.data(), q.size(), inv_dx2, prm.g,
                         static_cast<unsigned>(prm.k));
}

} // namespace

void ChainParams::validate() const {
    if (N < 1) throw validation_error("ChainParams: N must be >= 1");
    if (!(a > 0.0)) throw validation_error("ChainParams: a must be positive");
    if (g < 0.0) throw validation_error("ChainParams: g must be >= 0");
    if (k < 1) throw validation_error("ChainParams: k must be >= 1");
    if (nu < 0.0) throw validation_error("ChainParams: nu must be >= 0");
    if (!(beta > 0.0)) throw validation_error("ChainParams: beta must be positive");
}

ChainState zero_state(const ChainParams& prm) {
    ChainState s;
    s.q.assign(static_cast<std::size_t>(prm.N), 0.0);
    s.p.assign(static_cast<std::size_t>(prm.N), 0.0);
    return s;
}

double site_coordinate(const ChainParams& prm, std::size_t i) {
    return -prm.a + (static_cast<double>(i) + 1.0) * prm.dx();
}

std::vector<double> normal_mode(const ChainParams& prm, int m) {
    if (m < 1 || m > prm.N) throw validation_error("normal_mode: m out of range");
    const double c = std::sqrt(2.0 / (prm.N + 1.0));
    std::vector<double> v(static_cast<std::size_t>(prm.N));
    for (int i = 0; i < prm.N; ++i)
        v[static_cast<std::size_t>(i)] =
            c * std::sin((i + 1.0) * m * std::numbers::pi / (prm.N + 1.0));
    return v;
}

double normal_mode_frequency(const ChainParams& prm, int m) {
    return (2.0 / prm.dx()) * std::sin(m * std::numbers::pi / (2.0 * (prm.N + 1.0)));
}

double chain_energy(const ChainState& s, const ChainParams& prm) {
    prm.validate();
    check_state(s, prm, "chain_energy");
    const double dx = prm.dx();
    const std::size_t n = s.q.size();

    const double kinetic = 0.5 * dx * kernels::sum_sq(s.p.data(), n);

    double spring = s.q[0] * s.q[0] + s.q[n - 1] * s.q[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = s.q[i + 1] - s.q[i];
        spring += d * d;
    }
    spring /= 2.0 * dx;

    const double pot = dx * prm.g / (2.0 * prm.k) *
                       kernels::pow_sum(s.q.data(), n, static_cast<unsigned>(2 * prm.k));
    return kinetic + spring + pot;
}

ChainState leapfrog_step(const ChainState& s, const ChainParams& prm, double dt) {
    if (prm.nu != 0.0)
        throw validation_error("leapfrog_step: conservative path requires nu = 0");
    return damped_step(s, prm, dt);
}

ChainState damped_step(const ChainState& s, const ChainParams& prm, double dt) {
    prm.validate();
    check_state(s, prm, "step");
    if (!(dt > 0.0)) throw validation_error("step: dt must be positive");
    const std::size_t n = s.q.size();
    ChainState out = s;
    std::vector<double> f(n);

    const double damp = (prm.nu > 0.0) ? std::exp(-0.5 * prm.nu * dt) : 1.0;
    if (damp != 1.0)
        for (double& p : out.p) p *= damp;

    force(out.q, prm, f);
    kernels::axpy(0.5 * dt, f.data(), out.p.data(), n);
    kernels::axpy(dt, out.p.data(), out.q.data(), n);
    force(out.q, prm, f);
    kernels::axpy(0.5 * dt, f.data(), out.p.data(), n);

    if (damp != 1.0)
        for (double& p : out.p) p *= damp;

    out.t = s.t + dt;
    check_bounded(out);
    return out;
}

void integrate(ChainState& s, const ChainParams& prm, double T, double dt,
               const std::function<void(const ChainState&)>& visit) {
    const long nsteps = std::lround(T / dt);
    if (visit) visit(s);
    for (long i = 0; i < nsteps; ++i) {
        s = damped_step(s, prm, dt);
        if (visit) visit(s);
    }
}

double evaluate_observable(const ObservableSpec& F, const ChainState& s,
                           const ChainParams& prm) {
    if (F.kind == ObservableSpec::Kind::energy) return chain_energy(s, prm);
    return evaluate_config_observable(F, s.q, prm.dx());
}

EstimateWithError time_average_observable(const ChainState& s0, const ChainParams& prm,
                                          double T, double dt, const ObservableSpec& F) {
    prm.validate();
    if (prm.nu != 0.0)
        throw validation_error("time_average_observable: requires conservative parameters (nu=0)");
    if (!(dt > 0.0) || T < 100.0 * dt)
        throw validation_error("time_average_observable: need T >= 100 dt");
    const long nsteps = std::lround(T / dt);
    ChainState s = s0;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nsteps));
    for (long i = 0; i < nsteps; ++i) {
        s = damped_step(s, prm, dt);
        samples.push_back(evaluate_observable(F, s, prm));
    }
    return batch_means(samples);
}

double kanai_residual(const ChainParams& prm, const std::vector<double>& U0, double T,
                      double dt) {
    prm.validate();
    if (U0.size() != static_cast<std::size_t>(prm.N))
        throw validation_error("kanai_residual: U0 size does not match N");
    if (!(dt > 0.0) || !(T > 0.0)) throw validation_error("kanai_residual: need T, dt > 0");
    const std::size_t n = U0.size();
    const double nu = prm.nu;
    const double inv_dx2 = 1.0 / (prm.dx() * prm.dx());
    const unsigned expo = static_cast<unsigned>(2 * prm.k - 1);

    // Damped chain: q(0) = U0, dq/dt(0) = 0.
    ChainState damped;
    damped.q = U0;
    damped.p.assign(n, 0.0);

    // Transformed chain beta = e^{nu t/2} q obeys
    //   beta_tt = Lap_h beta + (nu^2/4) beta - g e^{-(k-1) nu t} beta^{2k-1}
    // with beta(0) = U0, beta_t(0) = (nu/2) U0.
    std::vector<double> beta = U0;
    std::vector<double> bv(n);
    for (std::size_t i = 0; i < n; ++i) bv[i] = 0.5 * nu * U0[i];

    std::vector<double> f(n), powbuf(n);
    auto beta_force = [&](const std::vector<double>& b, double t, std::vector<double>& out) {
        kernels::laplacian_dirichlet(b.data(), out.data(), n, inv_dx2);
        kernels::axpy(0.25 * nu * nu, b.data(), out.data(), n);
        if (prm.g > 0.0) {
            kernels::pow_elem(b.data(), powbuf.data(), n, expo);
            const double coeff = -prm.g * std::exp(-(prm.k - 1.0) * nu * t);
            kernels::axpy(coeff, powbuf.data(), out.data(), n);
        }
    };

    const long nsteps = std::lround(T / dt);
    double worst = 0.0;
    double t = 0.0;
    for (long step = 0; step < nsteps; ++step) {
        damped = damped_step(damped, prm, dt);

        beta_force(beta, t, f);
        kernels::axpy(0.5 * dt, f.data(), bv.data(), n);
        kernels::axpy(dt, bv.data(), beta.data(), n);
        beta_force(beta, t + dt, f);
        kernels::axpy(0.5 * dt, f.data(), bv.data(), n);
        t += dt;

        for (double v : beta)
            if (!std::isfinite(v) || std::abs(v) > kDivergenceBound)
                throw trajectory_diverged("kanai_residual: transformed trajectory diverged");

        const double scale = std::exp(0.5 * nu * t);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = scale * damped.q[i] - beta[i];
            num += d * d;
            den += beta[i] * beta[i];
        }
        const double bnorm = std::sqrt(den);
        if (bnorm > 1e-300) worst = std::max(worst, std::sqrt(num) / bnorm);
    }
    return worst;
}

double liouville_jacobian_check(const ChainState& s0, const ChainParams& prm, double T,
                                double dt, double fd_step) {
    prm.validate();
    check_state(s0, prm, "liouville_jacobian_check");
    if (prm.nu != 0.0)
        throw validation_error("liouville_jacobian_check: requires conservative parameters");
    const long nsteps = (T > 0.0) ? std::lround(T / dt) : 0;
    if (nsteps == 0) return 0.0;
    const int n = prm.N;
    const int dim = 2 * n;

    auto flow = [&](const ChainState& s) {
        ChainState r = s;
        for (long i = 0; i < nsteps; ++i) r = damped_step(r, prm, dt);
        return r;
    };
    auto get = [&](const ChainState& s, int j) { return j < n ? s.q[j] : s.p[j - n]; };
    auto set = [&](ChainState& s, int j, double v) {
        if (j < n)
            s.q[j] = v;
        else
            s.p[j - n] = v;
    };

    Eigen::MatrixXd J(dim, dim);
    for (int j = 0; j < dim; ++j) {
        ChainState plus = s0, minus = s0;
        set(plus, j, get(s0, j) + fd_step);
        set(minus, j, get(s0, j) - fd_step);
        const ChainState fp = flow(plus);
        const ChainState fm = flow(minus);
        for (int i = 0; i < dim; ++i)
            J(i, j) = (get(fp, i) - get(fm, i)) / (2.0 * fd_step);
    }
    return std::abs(J.determinant() - 1.0);
}

} // namespace ergokit::chain
