#include "superweyl/hjcoeffs.hpp"

#include "superweyl/errors.hpp"

#include <cmath>
#include <string>

namespace superweyl {

namespace {

constexpr cplx I{0.0, 1.0};

Jet2 jet_of(const ComponentJet& a) {
    Jet2 r(a.value);
    for (int i = 0; i < 3; ++i) r.g[i] = a.d1[static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) r.h[sym_index(i, j)] = a.d2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return r;
}

// jet of d/dq_k of the component
Jet2 derivative_jet_of(const ComponentJet& a, int k) {
    const auto kk = static_cast<std::size_t>(k);
    Jet2 r(a.d1[kk]);
    for (int i = 0; i < 3; ++i) r.g[i] = a.d2[kk][static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) r.h[sym_index(i, j)] = a.d3[kk][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return r;
}

// Constant third derivatives of the odd Hamiltonian block in xi.
struct ThirdDerivatives {
    std::array<cplx, 3> pt; // H_{pi1 theta1 xi_j} = H_{pi2 theta2 xi_j}
    std::array<cplx, 3> pp; // H_{pi2 pi1 xi_j}
    std::array<cplx, 3> tt; // H_{theta2 theta1 xi_j}

    explicit ThirdDerivatives(const HamiltonianParams& hp) {
        const double c = hp.c, ih = 1.0 / hp.hbar;
        pt = {0.0, 0.0, -I * c * ih};
        pp = {c * ih * ih, -I * c * ih * ih, 0.0};
        tt = {c, I * c, 0.0};
    }
};

struct State {
    // quadratures of A0 and grad A0
    Jet2 q0;
    std::array<Jet2, 3> ia0;
    // phase: Riccati coefficient, integral of w0, s01
    Jet2 s10, W, s01;
    // first-order tier
    Jet1 s11, a10, ac1, ac2, a01;
    cplx a11{};
};

template <class F> void zip(State& out, const State& a, const State& b, F f) {
    out.q0 = f(a.q0, b.q0);
    for (int i = 0; i < 3; ++i) out.ia0[i] = f(a.ia0[i], b.ia0[i]);
    out.s10 = f(a.s10, b.s10);
    out.W = f(a.W, b.W);
    out.s01 = f(a.s01, b.s01);
    out.s11 = f(a.s11, b.s11);
    out.a10 = f(a.a10, b.a10);
    out.ac1 = f(a.ac1, b.ac1);
    out.ac2 = f(a.ac2, b.ac2);
    out.a01 = f(a.a01, b.a01);
    out.a11 = f(a.a11, b.a11);
}

State axpy(const State& y, double h, const State& k) {
    State r;
    zip(r, y, k, [h](const auto& a, const auto& b) { return a + b * h; });
    return r;
}

// Everything derived from a state at one time.
struct Derived {
    Jet2 p1, p2, p3;        // c xi_k - eps A_k - c eps int dA0/dx_k
    Jet2 hpt, hpp, htt;     // H_{pi1 theta1}, H_{pi2 pi1}, H_{theta2 theta1}
    Jet2 sc, a00;           // exp(-W), exp(W)
    Jet1 w0;
    cplx w1{}, w2{}, w3{}, w4{};
};

class Field {
public:
    Field(const EMPotential& pot, const Vec3& x) : pot_(pot), x_(x), frozen_(pot.time_independent()) {
        if (frozen_) pot_.evaluate(0.0, x_, 3, cache_);
    }
    const PotentialJet& at(double t) {
        if (!frozen_ && t != cache_t_) {
            pot_.evaluate(t, x_, 3, cache_);
            cache_t_ = t;
        }
        return cache_;
    }

private:
    const EMPotential& pot_;
    Vec3 x_;
    bool frozen_;
    PotentialJet cache_{};
    double cache_t_ = std::numeric_limits<double>::quiet_NaN();
};

class System {
public:
    System(const Vec3& xi, const HamiltonianParams& hp) : xi_(xi), hp_(hp), third_(hp) {}

    // Fills the Hamiltonian blocks and w-terms; returns d/dt of the state when wanted.
    void evaluate(const PotentialJet& f, const State& y, Derived& dv, State* dy) const {
        const double c = hp_.c, eps = hp_.epsilon, ih = 1.0 / hp_.hbar;
        std::array<Jet2, 3> p;
        for (int k = 0; k < 3; ++k)
            p[k] = Jet2(c * xi_[static_cast<std::size_t>(k)]) - jet_of(f[static_cast<std::size_t>(k + 1)]) * eps -
                   y.ia0[k] * (c * eps);
        dv.p1 = p[0];
        dv.p2 = p[1];
        dv.p3 = p[2];
        dv.hpt = p[2] * (-I * ih);
        dv.hpp = (p[0] - p[1] * I) * (ih * ih);
        dv.htt = p[0] + p[1] * I;
        dv.sc = exp(-y.W);
        dv.a00 = exp(y.W);
        const Jet2 w0_2 = dv.hpt + y.s10 * dv.hpp;
        dv.w0 = lower(w0_2);

        // first-order tier; contractions with the constant third derivatives:
        // Dk(X) = sum_j k_j dX/dx_j
        const Jet1 s10 = lower(y.s10), sc = lower(dv.sc), a00 = lower(dv.a00), hpp = lower(dv.hpp);
        const Jet1 s10sq = s10 * s10, sc2 = sc * sc;
        const Jet2 sc2_2 = dv.sc * dv.sc;
        const auto& pt = third_.pt;
        const auto& pp = third_.pp;
        const auto& tt = third_.tt;
        const Jet1 pt_s01 = contract(y.s01, pt), pp_s01 = contract(y.s01, pp), tt_s01 = contract(y.s01, tt);
        const Jet1 pt_sc = contract(dv.sc, pt), pp_sc2 = contract(sc2_2, pp);
        const Jet1 pt_s10 = contract(y.s10, pt), pp_s10 = contract(y.s10, pp);
        const Jet1 pt_a00 = contract(dv.a00, pt), pp_a00 = contract(dv.a00, pp), tt_a00 = contract(dv.a00, tt);

        const Jet1 w1 = (s10 * pt_s01 - sc * pt_sc) * 2.0 + s10sq * pp_s01 + sc2 * pp_s10 - s10 * pp_sc2 + tt_s01;
        const Jet1 w2 = tt_a00 + s10 * pt_a00 * 2.0 + s10sq * pp_a00 + a00 * (pt_s10 + s10 * pp_s10);
        const Jet1 acd_grad = pt_a00 + s10 * pp_a00 + a00 * pp_s10;
        const Jet1 w3 = (y.ac1 * sc + y.ac2 * sc - a00 * y.s11) * hpp + sc2 * pp_a00 + a00 * pp_sc2 -
                        a00 * (s10 * pp_s01 + pt_s01);

        // zeroth-order tier; Dm = Dpt + s10 Dpp
        cplx w4{};
        {
            const cplx s10v = s10.v, scv = sc.v, sc2v = sc2.v, a00v = a00.v, a10v = y.a10.v, a01v = y.a01.v;
            const cplx acv = y.ac1.v + y.ac2.v, s11v = y.s11.v;
            const Jet1 ac = y.ac1 + y.ac2;
            auto dm = [&](cplx dpt, cplx dpp) { return dpt + s10v * dpp; };
            const cplx m_s11 = dm(contract(y.s11, pt), contract(y.s11, pp));
            const cplx m_a00 = dm(pt_a00.v, pp_a00.v);
            const cplx m_s10 = dm(pt_s10.v, pp_s10.v);
            const cplx m_s01 = dm(pt_s01.v, pp_s01.v);
            const cplx m_sc = dm(pt_sc.v, contract(dv.sc, pp).v);
            const cplx m_ac = dm(contract(ac, pt), contract(ac, pp));
            const cplx pt_a01 = contract(y.a01, pt), pp_a01 = contract(y.a01, pp), tt_a01 = contract(y.a01, tt);
            w4 = a10v * s11v * hpp.v;
            w4 += a00v * (m_s11 + s11v * pp_s10.v) + 2.0 * s11v * m_a00;
            w4 += a01v * m_s10 + tt_a01 + s10v * (s10v * pp_a01 + 2.0 * pt_a01);
            w4 += a10v * m_s01 + sc2v * contract(y.a10, pp);
            w4 -= acv * m_sc + scv * m_ac;
        }
        dv.w1 = w1.v;
        dv.w2 = w2.v;
        dv.w3 = w3.v;
        dv.w4 = w4;

        if (!dy) return;
        dy->q0 = jet_of(f[0]);
        for (int k = 0; k < 3; ++k) dy->ia0[k] = derivative_jet_of(f[0], k);
        dy->s10 = -(dv.hpp * y.s10 * y.s10 + dv.hpt * y.s10 * 2.0 + dv.htt);
        dy->W = w0_2;
        dy->s01 = -(sc2_2 * dv.hpp);
        dy->s11 = -(dv.w0 * y.s11 * 2.0 + w1);
        dy->a10 = -(dv.w0 * y.a10 + w2);
        dy->ac1 = -(sc * (acd_grad + y.a10 * hpp));
        dy->ac2 = dy->ac1;
        dy->a01 = dv.w0 * y.a01 - w3;
        dy->a11 = -dv.w0.v * y.a11 - w4;
    }

private:
    Vec3 xi_;
    HamiltonianParams hp_;
    ThirdDerivatives third_;
};

std::array<cplx, 3> grad_of(const Jet1& j) { return j.g; }
std::array<cplx, 3> grad_of(const Jet2& j) { return j.g; }

CoefficientSet assemble(double t, const Vec3& x, const Vec3& xi, const State& y, const Derived& dv,
                        const HamiltonianParams& hp) {
    CoefficientSet out;
    out.t = t;
    const double eps = hp.epsilon;
    auto& S = out.S;
    S.s00 = x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2] - eps * y.q0.v;
    S.s10 = y.s10.v;
    S.s01 = y.s01.v;
    S.sc1d1 = S.sc2d2 = dv.sc.v;
    S.sc1d2 = S.sc2d1 = 0.0;
    S.s11 = y.s11.v;
    auto& A = out.A;
    A.a00 = dv.a00.v;
    A.a10 = y.a10.v;
    A.a01 = y.a01.v;
    A.ac1d1 = y.ac1.v;
    A.ac2d2 = y.ac2.v;
    A.ac1d2 = A.ac2d1 = 0.0;
    A.a11 = y.a11;
    auto& g = out.sens;
    for (std::size_t j = 0; j < 3; ++j) g.s00[j] = xi[j] - eps * y.q0.g[j];
    g.s10 = grad_of(y.s10);
    g.s01 = grad_of(y.s01);
    g.sc1d1 = g.sc2d2 = grad_of(dv.sc);
    g.s11 = grad_of(y.s11);
    g.a00 = grad_of(dv.a00);
    g.a10 = grad_of(y.a10);
    g.a01 = grad_of(y.a01);
    g.ac1d1 = grad_of(y.ac1);
    g.ac2d2 = grad_of(y.ac2);
    out.w = {dv.w0.v, dv.w1, dv.w2, dv.w3, dv.w4};
    return out;
}

constexpr double kMaxSubsteps = 1 << 14;

void check_blowup(const State& y, double threshold, double t) {
    const double m = std::abs(y.s10.v);
    if (!(m <= threshold))
        throw RiccatiBlowup("Riccati coefficient reached " + std::to_string(m) + " at t = " + std::to_string(t));
}

} // namespace

std::vector<CoefficientSet> solve_coefficients(double s, const std::vector<double>& times, const Vec3& x,
                                               const Vec3& xi, const EMPotential& pot, const HamiltonianParams& hp,
                                               const CoefficientOptions& opt) {
    if (!(opt.dt > 0.0)) throw std::invalid_argument("solve_coefficients: dt must be positive");
    Field field(pot, x);
    const System sys(xi, hp);
    State y;
    Derived dv;
    std::vector<CoefficientSet> out;
    out.reserve(times.size());

    State k1, k2, k3, k4;
    auto rk4 = [&](double t0, double h, bool have_k1) {
        if (!have_k1) sys.evaluate(field.at(t0), y, dv, &k1);
        sys.evaluate(field.at(t0 + 0.5 * h), axpy(y, 0.5 * h, k1), dv, &k2);
        sys.evaluate(field.at(t0 + 0.5 * h), axpy(y, 0.5 * h, k2), dv, &k3);
        sys.evaluate(field.at(t0 + h), axpy(y, h, k3), dv, &k4);
        State incr;
        zip(incr, k1, k4, [](const auto& a, const auto& b) { return a + b; });
        zip(incr, incr, k2, [](const auto& a, const auto& b) { return a + b * 2.0; });
        zip(incr, incr, k3, [](const auto& a, const auto& b) { return a + b * 2.0; });
        y = axpy(y, h / 6.0, incr);
    };
    double tau = s;
    for (double target : times) {
        const double span = target - tau;
        if ((target - s) * span < 0.0 || std::abs(target - s) < std::abs(tau - s))
            throw std::invalid_argument("solve_coefficients: output times must move away from s");
        const int n = span == 0.0 ? 0 : std::max(1, static_cast<int>(std::ceil(std::abs(span) / opt.dt - 1e-9)));
        const double h = n ? span / n : 0.0;
        for (int i = 0; i < n; ++i) {
            const double t0 = tau + i * h;
            sys.evaluate(field.at(t0), y, dv, &k1);
            const double rate = 2.0 * std::abs(dv.w0.v);
            const double want = opt.max_rate_step > 0.0 ? std::ceil(std::abs(h) * rate / opt.max_rate_step) : 1.0;
            // a rate this large only occurs right next to a focal point
            if (!(want <= kMaxSubsteps))
                throw RiccatiBlowup("Riccati rate " + std::to_string(rate) + " at t = " + std::to_string(t0));
            const int sub = std::max(1, static_cast<int>(want));
            if (sub == 1) {
                rk4(t0, h, true);
            } else {
                for (int j = 0; j < sub; ++j) {
                    rk4(t0 + j * h / sub, h / sub, j == 0);
                    check_blowup(y, opt.blowup_threshold, t0 + (j + 1) * h / sub);
                }
            }
            check_blowup(y, opt.blowup_threshold, t0 + h);
        }
        tau = target;
        sys.evaluate(field.at(target), y, dv, nullptr);
        out.push_back(assemble(target, x, xi, y, dv, hp));
    }
    return out;
}

CoefficientSet solve_coefficients(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                                  const HamiltonianParams& hp, const CoefficientOptions& opt) {
    return solve_coefficients(s, std::vector<double>{t}, x, xi, pot, hp, opt).front();
}

SCoefficients integrate_S(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt) {
    return solve_coefficients(s, t, x, xi, pot, hp, {dt}).S;
}

ACoefficients integrate_A(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt) {
    return solve_coefficients(s, t, x, xi, pot, hp, {dt}).A;
}

SensitivityState sensitivities(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                               const HamiltonianParams& hp, double dt) {
    return solve_coefficients(s, t, x, xi, pot, hp, {dt}).sens;
}

HTildeDerivatives htilde_derivatives(double t, double s, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                                     const HamiltonianParams& hp, double dt) {
    // the quadrature of grad A0 is the only history dependence; reuse the integrator for it
    const CoefficientSet cs = solve_coefficients(s, t, x, xi, pot, hp, {dt});
    (void)cs;
    Field field(pot, x);
    const PotentialJet& f = field.at(t);
    const double c = hp.c, eps = hp.epsilon, ih = 1.0 / hp.hbar;
    std::array<cplx, 3> p;
    for (std::size_t k = 0; k < 3; ++k) {
        const cplx grad_s00 = cs.sens.s00[k];
        // c xi - eps A - c eps int dA0 = c (grad s00) - eps A
        p[k] = c * grad_s00 - eps * f[k + 1].value;
    }
    const ThirdDerivatives third(hp);
    HTildeDerivatives h;
    h.pi1theta1 = h.pi2theta2 = -I * ih * p[2];
    h.pi2pi1 = ih * ih * (p[0] - I * p[1]);
    h.theta2theta1 = p[0] + I * p[1];
    h.pi1theta1_xi = h.pi2theta2_xi = third.pt;
    h.pi2pi1_xi = third.pp;
    h.theta2theta1_xi = third.tt;
    return h;
}

FreeCoefficients closed_form_free(double s, double t, const Vec3& x, const Vec3& xi, const HamiltonianParams& hp) {
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    if (norm == 0.0) throw ZeroMomentum("closed_form_free: xi = 0");
    const double gamma = hp.c * (t - s) * norm / hp.hbar;
    const cplx delta = norm * std::cos(gamma) - I * xi[2] * std::sin(gamma);
    FreeCoefficients f{};
    f.S.s00 = x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2];
    f.S.sc1d1 = f.S.sc2d2 = norm / delta;
    f.S.s10 = -hp.hbar * cplx{xi[0], xi[1]} * std::sin(gamma) / delta;
    f.S.s01 = -cplx{xi[0], -xi[1]} * std::sin(gamma) / (hp.hbar * delta);
    f.A.a00 = delta / norm;
    return f;
}

GrassmannNumber phase_element(const SCoefficients& S) {
    using G = GrassmannNumber;
    return G(S.s00) + G::product_of({Theta1, Theta2}, S.s10) + G::product_of({Pi1, Pi2}, S.s01) +
           G::product_of({Theta1, Pi1}, S.sc1d1) + G::product_of({Theta1, Pi2}, S.sc1d2) +
           G::product_of({Theta2, Pi1}, S.sc2d1) + G::product_of({Theta2, Pi2}, S.sc2d2) +
           G::product_of({Theta1, Theta2, Pi1, Pi2}, S.s11);
}

GrassmannNumber amplitude_element(const ACoefficients& A) {
    using G = GrassmannNumber;
    return G(A.a00) + G::product_of({Theta1, Theta2}, A.a10) + G::product_of({Pi1, Pi2}, A.a01) +
           G::product_of({Theta1, Pi1}, A.ac1d1) + G::product_of({Theta1, Pi2}, A.ac1d2) +
           G::product_of({Theta2, Pi1}, A.ac2d1) + G::product_of({Theta2, Pi2}, A.ac2d2) +
           G::product_of({Theta1, Theta2, Pi1, Pi2}, A.a11);
}

} // namespace superweyl
