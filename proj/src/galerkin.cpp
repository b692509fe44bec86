#include "ergokit/galerkin.hpp"

#include <cmath>
#include <numbers>

#include "ergokit/kernels.hpp"

namespace ergokit::galerkin {

namespace {

constexpr double kDivergenceBound = 1e10;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int Q, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(Q);
    weights.resize(Q);
    const int half = (Q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (Q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int m = 2; m <= Q; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = Q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes(i) = -x;
        nodes(Q - 1 - i) = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights(i) = w;
        weights(Q - 1 - i) = w;
    }
}

Eigen::MatrixXd basis_table(const GalerkinSpec& spec, const Eigen::VectorXd& xs) {
    const double a = spec.a;
    const double inv_sqrt_a = 1.0 / std::sqrt(a);
    Eigen::MatrixXd B(xs.size(), spec.n);
    for (Eigen::Index q = 0; q < xs.size(); ++q)
        for (int m = 1; m <= spec.n; ++m)
            B(q, m - 1) = inv_sqrt_a * std::sin(m * std::numbers::pi * (xs(q) + a) / (2.0 * a));
    return B;
}

} // namespace

GalerkinSpec GalerkinSpec::single_term(int n, double a, double g, int k, int quad_points) {
    GalerkinSpec s;
    s.n = n;
    s.a = a;
    if (g != 0.0) s.terms.push_back({g, 2 * k - 1});
    s.quad_points = quad_points;
    s.validate();
    return s;
}

int GalerkinSpec::max_exponent() const {
    int e = 1;
    for (const auto& t : terms) e = std::max(e, t.exponent);
    return e;
}

void GalerkinSpec::validate() const {
    if (n < 1) throw validation_error("GalerkinSpec: n must be >= 1");
    if (!(a > 0.0)) throw validation_error("GalerkinSpec: a must be positive");
    for (const auto& t : terms) {
        if (t.exponent < 1 || t.exponent % 2 == 0)
            throw validation_error("GalerkinSpec: exponents must be odd and >= 1");
        if (t.coeff < 0.0)
            throw validation_error("GalerkinSpec: coefficients must be >= 0 (defocusing)");
    }
    if (quad_points != 0 && quad_points < 2 * max_exponent() * n)
        throw validation_error("GalerkinSpec: quad_points below the dealiasing bound 2*e*n");
}

double GalerkinSpec::mode_eigenvalue(int m) const {
    const double w = m * std::numbers::pi / (2.0 * a);
    return w * w;
}

GalerkinSystem::GalerkinSystem(GalerkinSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    int Q = spec_.quad_points;
    if (Q == 0) Q = std::max(2 * spec_.max_exponent() * spec_.n, 32);
    Eigen::VectorXd t, wt;
    gauss_legendre(Q, t, wt);
    nodes_ = spec_.a * t;
    weights_ = spec_.a * wt;
    gauss_legendre(2 * Q, t, wt);
    nodes2_ = spec_.a * t;
    weights2_ = spec_.a * wt;
    basis_ = basis_table(spec_, nodes_);
    basis2_ = basis_table(spec_, nodes2_);
    mu_.resize(spec_.n);
    for (int m = 1; m <= spec_.n; ++m) mu_(m - 1) = spec_.mode_eigenvalue(m);
}

Eigen::VectorXd GalerkinSystem::field_at_nodes(const Eigen::VectorXd& u) const {
    return basis_ * u;
}

Eigen::VectorXd GalerkinSystem::nonlinear_projection(const Eigen::VectorXd& u,
                                                     bool oversample) const {
    const Eigen::MatrixXd& B = oversample ? basis2_ : basis_;
    const Eigen::VectorXd& w = oversample ? weights2_ : weights_;
    if (spec_.terms.empty()) return Eigen::VectorXd::Zero(spec_.n);

    Eigen::VectorXd U = B * u;
    Eigen::VectorXd N(U.size());
    std::vector<double> coeff;
    std::vector<unsigned> expo;
    for (const auto& t : spec_.terms) {
        coeff.push_back(t.coeff);
        expo.push_back(static_cast<unsigned>(t.exponent));
    }
    kernels::poly_terms(U.data(), N.data(), static_cast<std::size_t>(U.size()), coeff.data(),
                        expo.data(), coeff.size());
    return B.transpose() * (w.cwiseProduct(N));
}

Eigen::VectorXd GalerkinSystem::rhs(const Eigen::VectorXd& u) const {
    if (u.size() != spec_.n) throw validation_error("galerkin rhs: mode vector size != n");
    Eigen::VectorXd acc = -mu_.cwiseProduct(u);
    if (!spec_.terms.empty()) acc -= nonlinear_projection(u, false);
    return acc;
}

double GalerkinSystem::energy(const ModeState& s) const {
    double E = 0.5 * s.v.squaredNorm() + 0.5 * mu_.dot(s.u.cwiseProduct(s.u));
    if (!spec_.terms.empty()) {
        const Eigen::VectorXd U = basis_ * s.u;
        Eigen::VectorXd P(U.size());
        std::vector<double> coeff;
        std::vector<unsigned> expo;
        for (const auto& t : spec_.terms) {
            coeff.push_back(t.coeff / (t.exponent + 1.0));
            expo.push_back(static_cast<unsigned>(t.exponent + 1));
        }
        kernels::poly_terms(U.data(), P.data(), static_cast<std::size_t>(U.size()), coeff.data(),
                            expo.data(), coeff.size());
        E += weights_.dot(P);
    }
    return E;
}

ModeState GalerkinSystem::verlet_step(const ModeState& s, double dt) const {
    ModeState out = s;
    Eigen::VectorXd acc = rhs(out.u);
    out.v += 0.5 * dt * acc;
    out.u += dt * out.v;
    acc = rhs(out.u);
    out.v += 0.5 * dt * acc;
    out.t = s.t + dt;
    if (!out.u.allFinite() || out.u.cwiseAbs().maxCoeff() > kDivergenceBound)
        throw trajectory_diverged("galerkin: mode amplitudes diverged");
    return out;
}

double GalerkinSystem::field_value(const Eigen::VectorXd& u, double x) const {
    double s = 0.0;
    const double inv_sqrt_a = 1.0 / std::sqrt(spec_.a);
    for (int m = 1; m <= spec_.n; ++m)
        s += u(m - 1) * inv_sqrt_a *
             std::sin(m * std::numbers::pi * (x + spec_.a) / (2.0 * spec_.a));
    return s;
}

Eigen::VectorXd GalerkinSystem::field_on_grid(const Eigen::VectorXd& u,
                                              const Eigen::VectorXd& xs) const {
    Eigen::VectorXd out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = field_value(u, xs(i));
    return out;
}

Eigen::VectorXd GalerkinSystem::project(const std::function<double(double)>& f) const {
    Eigen::VectorXd fv(nodes2_.size());
    for (Eigen::Index q = 0; q < nodes2_.size(); ++q) fv(q) = f(nodes2_(q));
    return basis2_.transpose() * (weights2_.cwiseProduct(fv));
}

void integrate_wave(const GalerkinSystem& sys, const Eigen::VectorXd& u0, double T, double dt,
                    const std::function<void(const ModeState&)>& visit) {
    if (!(dt > 0.0)) throw validation_error("integrate_wave: dt must be positive");
    ModeState s;
    s.u = u0;
    s.v = Eigen::VectorXd::Zero(u0.size());
    const long nsteps = std::lround(T / dt);
    if (visit) visit(s);
    for (long i = 0; i < nsteps; ++i) {
        s = sys.verlet_step(s, dt);
        if (visit) visit(s);
    }
}

ModeState integrate_to(const GalerkinSystem& sys, const Eigen::VectorXd& u0, double T,
                       double dt) {
    ModeState last;
    integrate_wave(sys, u0, T, dt, [&](const ModeState& s) { last = s; });
    return last;
}

std::vector<ConvergenceRow> convergence_study(const GalerkinSpec& base,
                                              const std::vector<int>& mode_counts,
                                              const std::function<double(double)>& U0, double T,
                                              double dt) {
    if (mode_counts.size() < 2)
        throw validation_error("convergence_study: need at least two mode counts");
    const int fine_pts = 2048;
    Eigen::VectorXd xs(fine_pts);
    for (int i = 0; i < fine_pts; ++i)
        xs(i) = -base.a + 2.0 * base.a * (i + 0.5) / fine_pts;
    const double dxf = 2.0 * base.a / fine_pts;

    std::vector<Eigen::VectorXd> fields;
    for (int n : mode_counts) {
        GalerkinSpec spec = base;
        spec.n = n;
        spec.quad_points = 0;
        GalerkinSystem sys(spec);
        const ModeState st = integrate_to(sys, sys.project(U0), T, dt);
        fields.push_back(sys.field_on_grid(st.u, xs));
    }

    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
        const double d2 = (fields[i + 1] - fields[i]).squaredNorm() * dxf;
        rows.push_back({mode_counts[i], mode_counts[i + 1], std::sqrt(d2)});
    }
    return rows;
}

GronwallReport gronwall_stability_check(const GalerkinSpec& spec,
                                        const std::function<double(double)>& U0, double delta,
                                        double T, double dt) {
    spec.validate();
    if (delta < 0.0) throw validation_error("gronwall_stability_check: delta must be >= 0");
    GalerkinSystem sys(spec);

    auto bump = [&](double x) { return std::cos(std::numbers::pi * x / (2.0 * spec.a)); };
    const Eigen::VectorXd u0 = sys.project(U0);
    const Eigen::VectorXd v0 =
        sys.project([&](double x) { return U0(x) + delta * bump(x); });

    Eigen::VectorXd mu(spec.n);
    for (int m = 1; m <= spec.n; ++m) mu(m - 1) = spec.mode_eigenvalue(m);
    auto energy_norm = [&](const ModeState& A, const ModeState& B) {
        const Eigen::VectorXd du = A.u - B.u;
        const Eigen::VectorXd dv = A.v - B.v;
        return std::sqrt(dv.squaredNorm() + mu.dot(du.cwiseProduct(du)));
    };

    ModeState sU, sV;
    sU.u = u0;
    sU.v = Eigen::VectorXd::Zero(spec.n);
    sV.u = v0;
    sV.v = Eigen::VectorXd::Zero(spec.n);

    GronwallReport rep;
    if (delta == 0.0) {
        rep.exact_uniqueness = true;
        rep.sup_ratio = 0.0;
        rep.M = 0.0;
        return rep;
    }

    const double E0 = energy_norm(sU, sV);
    std::vector<double> energies;
    std::vector<double> times;
    double M = 0.0;
    auto update_M = [&]() {
        const Eigen::VectorXd fU = sys.field_at_nodes(sU.u);
        const Eigen::VectorXd fV = sys.field_at_nodes(sV.u);
        for (Eigen::Index q = 0; q < fU.size(); ++q) {
            const double m = std::max(std::abs(fU(q)), std::abs(fV(q)));
            double aQ = 0.0;
            for (const auto& t : spec.terms)
                aQ += t.coeff * t.exponent * std::pow(m, t.exponent - 1.0);
            M = std::max(M, aQ);
        }
    };

    const long nsteps = std::lround(T / dt);
    update_M();
    energies.push_back(E0);
    times.push_back(0.0);
    for (long i = 0; i < nsteps; ++i) {
        sU = sys.verlet_step(sU, dt);
        sV = sys.verlet_step(sV, dt);
        update_M();
        energies.push_back(energy_norm(sU, sV));
        times.push_back(sU.t);
    }

    rep.M = M;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double envelope = E0 * std::exp(M * times[i]);
        rep.sup_ratio = std::max(rep.sup_ratio, energies[i] / envelope);
    }
    return rep;
}

HolderCheck holder_interpolation_check(const std::vector<double>& field_values, double dx,
                                       double q, int k) {
    if (k < 1) throw validation_error("holder_interpolation_check: k must be >= 1");
    if (!(q >= 2.0) || !(q <= 2.0 * k))
        throw validation_error("holder_interpolation_check: need 2 <= q <= 2k");
    if (field_values.empty() || !(dx > 0.0))
        throw validation_error("holder_interpolation_check: empty field");

    const double p2k = 2.0 * k;
    // 1/q = (1-theta)/2 + theta/(2k)
    const double theta = (k == 1) ? 0.0 : (0.5 - 1.0 / q) / (0.5 - 1.0 / p2k);

    auto norm = [&](double p) {
        double s = 0.0;
        for (double f : field_values) s += std::pow(std::abs(f), p);
        return std::pow(dx * s, 1.0 / p);
    };
    const double lq = norm(q);
    const double l2 = norm(2.0);
    const double l2k = norm(p2k);

    HolderCheck c;
    c.theta = theta;
    const double rhs = (1.0 - theta) * std::log(l2) + theta * std::log(l2k);
    c.slack = rhs - std::log(lq);
    c.pass = c.slack >= -1e-12;
    return c;
}

} // namespace ergokit::galerkin
