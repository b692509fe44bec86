#include "ergokit/langevin.hpp"

#include <cmath>

#include "ergokit/rng.hpp"

namespace ergokit::langevin {

namespace {

constexpr double kDivergenceBound = 1e8;

void check_stiffness(const LangevinSpec& spec, const Eigen::VectorXd& q, double dt) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q(i)) || std::abs(q(i)) > kDivergenceBound)
            throw trajectory_diverged("langevin: trajectory diverged");
        if (dt * std::abs(spec.v_second(q(i))) >= 0.5)
            throw numerical_error("langevin: dt too large for local curvature (dt |v''| >= 0.5)");
    }
}

} // namespace

LangevinSpec LangevinSpec::quadratic_well(double omega2, double kT, int d) {
    LangevinSpec s;
    s.potential = Potential::quadratic;
    s.omega2 = omega2;
    s.kT = kT;
    s.d = d;
    return s;
}

LangevinSpec LangevinSpec::double_well(double a, double b, double kT, int d) {
    LangevinSpec s;
    s.potential = Potential::double_well;
    s.dw_a = a;
    s.dw_b = b;
    s.kT = kT;
    s.d = d;
    return s;
}

LangevinSpec LangevinSpec::polynomial(std::vector<double> coeffs, double kT, int d) {
    LangevinSpec s;
    s.potential = Potential::polynomial;
    s.coefficients = std::move(coeffs);
    s.kT = kT;
    s.d = d;
    return s;
}

double LangevinSpec::v(double z) const {
    switch (potential) {
        case Potential::quadratic: return 0.5 * omega2 * z * z;
        case Potential::double_well: return dw_a * z * z * z * z / 4.0 - dw_b * z * z / 2.0;
        case Potential::polynomial: {
            double r = 0.0;
            for (std::size_t m = coefficients.size(); m-- > 0;) r = r * z + coefficients[m];
            return r;
        }
    }
    return 0.0;
}

double LangevinSpec::v_prime(double z) const {
    switch (potential) {
        case Potential::quadratic: return omega2 * z;
        case Potential::double_well: return dw_a * z * z * z - dw_b * z;
        case Potential::polynomial: {
            double r = 0.0;
            for (std::size_t m = coefficients.size(); m-- > 1;)
                r = r * z + coefficients[m] * static_cast<double>(m);
            return r;
        }
    }
    return 0.0;
}

double LangevinSpec::v_second(double z) const {
    switch (potential) {
        case Potential::quadratic: return omega2;
        case Potential::double_well: return 3.0 * dw_a * z * z - dw_b;
        case Potential::polynomial: {
            double r = 0.0;
            for (std::size_t m = coefficients.size(); m-- > 2;)
                r = r * z + coefficients[m] * static_cast<double>(m) * static_cast<double>(m - 1);
            return r;
        }
    }
    return 0.0;
}

void LangevinSpec::validate() const {
    if (kT < 0.0) throw validation_error("LangevinSpec: kT must be >= 0");
    if (!(gamma > 0.0)) throw validation_error("LangevinSpec: gamma must be positive");
    if (d < 1) throw validation_error("LangevinSpec: dimension must be >= 1");
}

double confining_range(const LangevinSpec& spec) {
    const double kT = spec.kT > 0.0 ? spec.kT : 1.0;
    double vmin = spec.v(0.0);
    for (double z = -3.0; z <= 3.0; z += 0.01) vmin = std::min(vmin, spec.v(z));
    double L = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        if (spec.v(L) - vmin > 40.0 * kT && spec.v(-L) - vmin > 40.0 * kT) return L;
        L *= 1.25;
    }
    throw numerical_error("confining_range: potential is not confining");
}

double boltzmann_normalization(const LangevinSpec& spec, double halfwidth, int n_points) {
    if (n_points % 2 != 0) ++n_points;
    const double h = 2.0 * halfwidth / n_points;
    auto f = [&](double z) { return std::exp(-spec.v(z) / spec.kT); };
    double s = f(-halfwidth) + f(halfwidth);
    for (int i = 1; i < n_points; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(-halfwidth + i * h);
    return s * h / 3.0;
}

std::vector<Eigen::VectorXd> euler_maruyama_trajectory(const LangevinSpec& spec,
                                                       const Eigen::VectorXd& q0, double T,
                                                       double dt, std::uint64_t seed,
                                                       long record_stride) {
    spec.validate();
    if (q0.size() != spec.d) throw validation_error("euler_maruyama_trajectory: q0 size != d");
    if (!(dt > 0.0) || !(T > 0.0))
        throw validation_error("euler_maruyama_trajectory: need T, dt > 0");
    if (record_stride < 1) record_stride = 1;

    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise = std::sqrt(2.0 * spec.kT * dt);
    const long nsteps = std::lround(T / dt);

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(nsteps / record_stride) + 1);
    Eigen::VectorXd q = q0;
    for (long s = 0; s < nsteps; ++s) {
        for (int i = 0; i < spec.d; ++i)
            q(i) += -spec.v_prime(q(i)) * dt + noise * gauss(rng);
        check_stiffness(spec, q, dt);
        if ((s + 1) % record_stride == 0) out.push_back(q);
    }
    return out;
}

HistogramReport stationary_histogram_check(const LangevinSpec& spec, const RunConfig& cfg) {
    spec.validate();
    if (spec.d != 1)
        throw validation_error("stationary_histogram_check: histogram comparison needs d = 1");
    if (!(spec.kT > 0.0))
        throw validation_error("stationary_histogram_check: needs kT > 0");

    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise = std::sqrt(2.0 * spec.kT * cfg.dt);
    const long nburn = std::lround(cfg.burn_in_time / cfg.dt);
    const long nsteps = std::lround(cfg.T / cfg.dt);

    double q = 0.0;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nsteps / cfg.record_stride) + 1);
    for (long s = 0; s < nburn + nsteps; ++s) {
        q += -spec.v_prime(q) * cfg.dt + noise * gauss(rng);
        if (!std::isfinite(q) || std::abs(q) > kDivergenceBound)
            throw trajectory_diverged("stationary_histogram_check: diverged");
        if (cfg.dt * std::abs(spec.v_second(q)) >= 0.5)
            throw numerical_error("stationary_histogram_check: dt too large for curvature");
        if (s >= nburn && (s - nburn) % cfg.record_stride == 0) samples.push_back(q);
    }

    const double L = cfg.hist_halfwidth > 0.0 ? cfg.hist_halfwidth : confining_range(spec);
    const double Z = boltzmann_normalization(spec, L);
    return make_histogram(samples, -L, L, cfg.nbins,
                          [&](double z) { return std::exp(-spec.v(z) / spec.kT) / Z; });
}

EstimateWithError stationary_moment(const LangevinSpec& spec, const RunConfig& cfg, int power) {
    spec.validate();
    if (spec.d != 1) throw validation_error("stationary_moment: needs d = 1");
    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise = std::sqrt(2.0 * spec.kT * cfg.dt);
    const long nburn = std::lround(cfg.burn_in_time / cfg.dt);
    const long nsteps = std::lround(cfg.T / cfg.dt);
    double q = 0.0;
    std::vector<double> samples;
    for (long s = 0; s < nburn + nsteps; ++s) {
        q += -spec.v_prime(q) * cfg.dt + noise * gauss(rng);
        if (!std::isfinite(q) || std::abs(q) > kDivergenceBound)
            throw trajectory_diverged("stationary_moment: diverged");
        if (s >= nburn && (s - nburn) % cfg.record_stride == 0)
            samples.push_back(std::pow(q, power));
    }
    return batch_means(samples);
}

UnderdampedReport underdamped_equilibrium_check(const LangevinSpec& spec, const RunConfig& cfg) {
    spec.validate();
    if (spec.d != 1)
        throw validation_error("underdamped_equilibrium_check: needs d = 1");
    if (!(spec.kT > 0.0) || !(spec.gamma > 0.0))
        throw validation_error("underdamped_equilibrium_check: needs kT > 0 and gamma > 0");

    auto rng = make_rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double dt = cfg.dt;
    const double c = std::exp(-spec.gamma * dt);
    const double sigma = std::sqrt(spec.kT * (1.0 - c * c));
    const long nburn = std::lround(cfg.burn_in_time / dt);
    const long nsteps = std::lround(cfg.T / dt);

    double q = 0.0, p = 0.0;
    std::vector<double> qs, ps, p2s, qps;
    for (long s = 0; s < nburn + nsteps; ++s) {
        p += 0.5 * dt * (-spec.v_prime(q));
        q += 0.5 * dt * p;
        p = c * p + sigma * gauss(rng);
        q += 0.5 * dt * p;
        p += 0.5 * dt * (-spec.v_prime(q));
        if (!std::isfinite(q) || std::abs(q) > kDivergenceBound)
            throw trajectory_diverged("underdamped_equilibrium_check: diverged");
        if (s >= nburn && (s - nburn) % cfg.record_stride == 0) {
            qs.push_back(q);
            ps.push_back(p);
            p2s.push_back(p * p);
            qps.push_back(q * p);
        }
    }

    UnderdampedReport rep;
    const double Lq = cfg.hist_halfwidth > 0.0 ? cfg.hist_halfwidth : confining_range(spec);
    const double Zq = boltzmann_normalization(spec, Lq);
    rep.q_marginal = make_histogram(qs, -Lq, Lq, cfg.nbins,
                                    [&](double z) { return std::exp(-spec.v(z) / spec.kT) / Zq; });
    const double sp = std::sqrt(spec.kT);
    rep.p_marginal = make_histogram(ps, -6.0 * sp, 6.0 * sp, cfg.nbins, [&](double z) {
        return std::exp(-z * z / (2.0 * spec.kT)) / std::sqrt(2.0 * std::acos(-1.0) * spec.kT);
    });
    rep.p_variance = batch_means(p2s);
    rep.qp_correlation = batch_means(qps);
    return rep;
}

} // namespace ergokit::langevin
