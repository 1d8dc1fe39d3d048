#include "superweyl/superflow.hpp"

#include "superweyl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace superweyl {

PhasePoint& PhasePoint::operator+=(const PhasePoint& o) {
    for (std::size_t j = 0; j < 3; ++j) {
        x[j] += o.x[j];
        xi[j] += o.xi[j];
    }
    for (std::size_t k = 0; k < 2; ++k) {
        theta[k] += o.theta[k];
        pi[k] += o.pi[k];
    }
    return *this;
}

PhasePoint& PhasePoint::operator*=(double s) {
    for (auto& v : x) v *= cplx{s};
    for (auto& v : xi) v *= cplx{s};
    for (auto& v : theta) v *= cplx{s};
    for (auto& v : pi) v *= cplx{s};
    return *this;
}

PhasePoint operator+(PhasePoint a, const PhasePoint& b) { return a += b; }
PhasePoint operator*(double s, PhasePoint a) { return a *= s; }

EvenVec even_vec(const Vec3& v) { return {GrassmannNumber(v[0]), GrassmannNumber(v[1]), GrassmannNumber(v[2])}; }

namespace {

constexpr cplx I{0.0, 1.0};

Vec3 body_of(const EvenVec& x) { return {x[0].body().real(), x[1].body().real(), x[2].body().real()}; }

// eta_j = xi_j - (eps/c) A_j(t, x) and the continued potentials at x.
struct FieldAtPoint {
    EvenVec eta;
    GrassmannNumber a0;
    PotentialJet jet;
};

FieldAtPoint field_at(double t, const PhasePoint& p, const EMPotential& pot, const HamiltonianParams& hp, int order) {
    FieldAtPoint f;
    pot.evaluate(t, body_of(p.x), order, f.jet);
    const double k = hp.epsilon / hp.c;
    for (std::size_t j = 0; j < 3; ++j) f.eta[j] = p.xi[j] - grassmann_continuation(f.jet[j + 1].local(), p.x) * k;
    f.a0 = grassmann_continuation(f.jet[0].local(), p.x);
    return f;
}

} // namespace

EvenVec sigma_symbols(const OddVec& theta, const OddVec& pi, double hbar) {
    const GrassmannNumber tt = theta[0] * theta[1];
    const GrassmannNumber pp = pi[0] * pi[1] * (1.0 / (hbar * hbar));
    return {tt + pp, (tt - pp) * I, (theta[0] * pi[0] + theta[1] * pi[1]) * (-I / hbar)};
}

GrassmannNumber hamiltonian(double t, const PhasePoint& p, const EMPotential& pot, const HamiltonianParams& hp) {
    const FieldAtPoint f = field_at(t, p, pot, hp, 2);
    const EvenVec sigma = sigma_symbols(p.theta, p.pi, hp.hbar);
    GrassmannNumber h = f.a0 * hp.epsilon;
    for (std::size_t j = 0; j < 3; ++j) h += sigma[j] * f.eta[j] * hp.c;
    return h;
}

PhasePoint hamilton_rhs(double t, const PhasePoint& p, const EMPotential& pot, const HamiltonianParams& hp) {
    const FieldAtPoint f = field_at(t, p, pot, hp, 3);
    const EvenVec sigma = sigma_symbols(p.theta, p.pi, hp.hbar);
    const double c = hp.c;
    const double ih = 1.0 / hp.hbar;
    const double eps = hp.epsilon;

    PhasePoint d;
    for (std::size_t j = 0; j < 3; ++j) {
        d.x[j] = sigma[j] * c;
        GrassmannNumber dxi = -grassmann_continuation(f.jet[0].local(static_cast<int>(j)), p.x);
        for (std::size_t k = 0; k < 3; ++k)
            dxi += sigma[k] * grassmann_continuation(f.jet[k + 1].local(static_cast<int>(j)), p.x);
        d.xi[j] = dxi * eps;
    }

    const GrassmannNumber minus = f.eta[0] - f.eta[1] * I; // eta1 - i eta2
    const GrassmannNumber plus = f.eta[0] + f.eta[1] * I;  // eta1 + i eta2
    const GrassmannNumber e3 = f.eta[2];
    d.theta[0] = minus * p.pi[1] * (-c * ih * ih) - e3 * p.theta[0] * (I * c * ih);
    d.theta[1] = minus * p.pi[0] * (c * ih * ih) - e3 * p.theta[1] * (I * c * ih);
    d.pi[0] = plus * p.theta[1] * (-c) + e3 * p.pi[0] * (I * c * ih);
    d.pi[1] = plus * p.theta[0] * c + e3 * p.pi[1] * (I * c * ih);
    return d;
}

Trajectory flow_integrate(double s, double t, const PhasePoint& init, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("flow_integrate: dt must be positive");
    const double span = t - s;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / dt - 1e-9)));
    const double h = span / n;

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n + 1));
    traj.states.reserve(static_cast<std::size_t>(n + 1));
    traj.times.push_back(s);
    traj.states.push_back(init);
    PhasePoint p = init;
    for (int i = 0; i < n; ++i) {
        const double ti = s + i * h;
        const PhasePoint k1 = hamilton_rhs(ti, p, pot, hp);
        const PhasePoint k2 = hamilton_rhs(ti + 0.5 * h, p + (0.5 * h) * k1, pot, hp);
        const PhasePoint k3 = hamilton_rhs(ti + 0.5 * h, p + (0.5 * h) * k2, pot, hp);
        const PhasePoint k4 = hamilton_rhs(ti + h, p + h * k3, pot, hp);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.times.push_back(s + (i + 1) * h);
        traj.states.push_back(p);
    }
    return traj;
}

double energy_drift(const Trajectory& traj, const EMPotential& pot, const HamiltonianParams& hp) {
    const GrassmannNumber h0 = hamiltonian(traj.times.front(), traj.states.front(), pot, hp);
    double drift = 0.0;
    for (std::size_t i = 1; i < traj.states.size(); ++i)
        drift = std::max(drift, distance(hamiltonian(traj.times[i], traj.states[i], pot, hp), h0));
    return drift;
}

GrassmannNumber action_integral(const Trajectory& traj, const EMPotential& pot, const HamiltonianParams& hp) {
    const std::size_t n = traj.states.size() - 1;
    if (n == 0) return GrassmannNumber{};
    std::vector<GrassmannNumber> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const PhasePoint& p = traj.states[i];
        const PhasePoint d = hamilton_rhs(traj.times[i], p, pot, hp);
        GrassmannNumber l = -hamiltonian(traj.times[i], p, pot, hp);
        for (std::size_t j = 0; j < 3; ++j) l += d.x[j] * p.xi[j];
        for (std::size_t k = 0; k < 2; ++k) l += d.theta[k] * p.pi[k];
        f[i] = l;
    }
    const double h = (traj.times.back() - traj.times.front()) / static_cast<double>(n);
    GrassmannNumber acc;
    if (n == 1) return (f[0] + f[1]) * (0.5 * h);
    std::size_t simpson_end = (n % 2 == 0) ? n : n - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) acc += (f[i] + f[i + 1] * 4.0 + f[i + 2]) * (h / 3.0);
    if (simpson_end != n) {
        const std::size_t i = simpson_end;
        acc += (f[i] + f[i + 1] * 3.0 + f[i + 2] * 3.0 + f[i + 3]) * (3.0 * h / 8.0);
    }
    return acc;
}

namespace {

// 2x2 body Jacobian d theta(t) / d theta(s) along the body trajectory.
Matrix2c odd_jacobian(double s, double t, const Vec3& y, const Vec3& xi, const EMPotential& pot,
                      const HamiltonianParams& hp, double dt) {
    PhasePoint init;
    init.x = even_vec(y);
    init.xi = even_vec(xi);
    init.theta = {GrassmannNumber::generator(Theta1), GrassmannNumber::generator(Theta2)};
    init.pi = {GrassmannNumber::generator(Pi1), GrassmannNumber::generator(Pi2)};
    const Trajectory tr = flow_integrate(s, t, init, pot, hp, dt);
    const PhasePoint& e = tr.final_state();
    Matrix2c j{};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) j[r][c] = e.theta[r][1u << c];
    return j;
}

} // namespace

FlowInverse invert_flow(double s, double t, const EvenVec& x_bar, const OddVec& theta_bar, const EvenVec& xi_under,
                        const OddVec& pi_under, const EMPotential& pot, const HamiltonianParams& hp, double dt,
                        double tol) {
    const Matrix2c jac = odd_jacobian(s, t, body_of(x_bar), body_of(xi_under), pot, hp, dt);
    const cplx det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (std::abs(det) < 1e-14) throw NoConvergence("invert_flow: odd Jacobian is singular");
    const Matrix2c inv{{{jac[1][1] / det, -jac[0][1] / det}, {-jac[1][0] / det, jac[0][0] / det}}};

    FlowInverse r;
    r.y = x_bar;
    r.omega = theta_bar;
    double prev = std::numeric_limits<double>::infinity();
    constexpr int kMaxIterations = 12;
    for (int it = 0; it < kMaxIterations; ++it) {
        PhasePoint init{r.y, xi_under, r.omega, pi_under};
        r.trajectory = flow_integrate(s, t, init, pot, hp, dt);
        r.iterations = it + 1;
        const PhasePoint& e = r.trajectory.final_state();
        EvenVec rx;
        OddVec rt;
        double res = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            rx[j] = x_bar[j] - e.x[j];
            res = std::max(res, rx[j].max_abs());
        }
        for (std::size_t k = 0; k < 2; ++k) {
            rt[k] = theta_bar[k] - e.theta[k];
            res = std::max(res, rt[k].max_abs());
        }
        r.residual = res;
        if (res <= 1e-14 || (res <= tol && res >= 0.5 * prev)) return r;
        prev = res;
        for (std::size_t j = 0; j < 3; ++j) r.y[j] += rx[j];
        for (std::size_t k = 0; k < 2; ++k) r.omega[k] += rt[0] * inv[k][0] + rt[1] * inv[k][1];
    }
    if (r.residual > tol)
        throw NoConvergence("invert_flow: residual " + std::to_string(r.residual) + " above tolerance");
    return r;
}

namespace {

struct PhaseSample {
    GrassmannNumber S;
    EvenVec y;
    OddVec omega;
    double drift = 0.0;
};

PhaseSample phase_at(double s, double t, const Vec3& x_bar, const Vec3& xi_under, const EMPotential& pot,
                     const HamiltonianParams& hp, double dt) {
    const OddVec theta_bar{GrassmannNumber::generator(Theta1), GrassmannNumber::generator(Theta2)};
    const OddVec pi_under{GrassmannNumber::generator(Pi1), GrassmannNumber::generator(Pi2)};
    const EvenVec xi = even_vec(xi_under);
    const FlowInverse inv = invert_flow(s, t, even_vec(x_bar), theta_bar, xi, pi_under, pot, hp, dt);
    PhaseSample out;
    out.y = inv.y;
    out.omega = inv.omega;
    out.S = action_integral(inv.trajectory, pot, hp);
    for (std::size_t j = 0; j < 3; ++j) out.S += inv.y[j] * xi_under[j];
    for (std::size_t k = 0; k < 2; ++k) out.S += inv.omega[k] * pi_under[k];
    out.drift = energy_drift(inv.trajectory, pot, hp);
    return out;
}

} // namespace

OracleResult oracle_phase_and_amplitude(double s, double t, const Vec3& x_bar, const Vec3& xi_under,
                                        const EMPotential& pot, const HamiltonianParams& hp, double dt,
                                        double fd_step) {
    const PhaseSample centre = phase_at(s, t, x_bar, xi_under, pot, hp, dt);

    // rows: x_bar1..3, theta_bar1..2; columns: xi_under1..3, pi_under1..2
    SuperMatrix m(3, 2);
    std::array<GrassmannNumber, 2> dpi_s{odd_derivative(centre.S, Pi1), odd_derivative(centre.S, Pi2)};
    for (int j = 0; j < 3; ++j) {
        Vec3 xp = x_bar, xm = x_bar;
        xp[static_cast<std::size_t>(j)] += fd_step;
        xm[static_cast<std::size_t>(j)] -= fd_step;
        const PhaseSample sp = phase_at(s, t, xp, xi_under, pot, hp, dt);
        const PhaseSample sm = phase_at(s, t, xm, xi_under, pot, hp, dt);
        const double w = 0.5 / fd_step;
        for (int k = 0; k < 3; ++k)
            m(j, k) = (sp.y[static_cast<std::size_t>(k)] - sm.y[static_cast<std::size_t>(k)]) * w;
        for (int k = 0; k < 2; ++k) {
            const int g = Pi1 + k;
            m(j, 3 + k) = (odd_derivative(sp.S, g) - odd_derivative(sm.S, g)) * w;
        }
    }
    for (int r = 0; r < 2; ++r) {
        const int g = Theta1 + r;
        for (int k = 0; k < 3; ++k) m(3 + r, k) = odd_derivative(centre.y[static_cast<std::size_t>(k)], g);
        for (int k = 0; k < 2; ++k) m(3 + r, 3 + k) = odd_derivative(dpi_s[static_cast<std::size_t>(k)], g);
    }

    OracleResult out;
    out.S = centre.S;
    out.D = sdet(m);
    out.y = centre.y;
    out.omega = centre.omega;
    out.energy_drift = centre.drift;
    return out;
}

} // namespace superweyl
