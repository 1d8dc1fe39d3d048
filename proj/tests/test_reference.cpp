#include <cmath>
#include <random>

#include "doctest.h"
#include "scenarios.hpp"
#include "superweyl/reference.hpp"

using namespace superweyl;
using namespace superweyl::testing;

namespace {

const cplx I(0.0, 1.0);

SpinorField random_spinor(const Grid3D& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Field a = gaussian_packet(g, {u(rng), u(rng), u(rng)}, 1.4, {u(rng), u(rng), u(rng)}, 1.0);
    const Field b = gaussian_packet(g, {u(rng), u(rng), u(rng)}, 1.1, {u(rng), u(rng), u(rng)}, 1.0);
    SpinorField s(g, a, b);
    for (auto& z : s.psi2) z *= cplx(u(rng), u(rng));
    return s;
}

double rel(const SpinorField& a, const SpinorField& b) { return norm(a - b) / norm(b); }

const GaussianBumpPotential& bumps() {
    static const GaussianBumpPotential pot({{0, 0.7, {0.2, -0.1, 0.3}, 0.8}, {1, 0.5, {-0.3, 0.2, 0.1}, 0.9},
                                            {2, -0.4, {0.1, 0.4, -0.2}, 0.7}, {3, 0.6, {0.0, -0.3, 0.2}, 1.1}});
    return pot;
}

SpinorField plane(const Grid3D& g, const std::array<int, 3>& m, cplx a, cplx b) {
    SpinorField s(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 x = g.node(i);
        double ph = 0.0;
        for (int j = 0; j < 3; ++j) ph += 2.0 * M_PI * m[j] * x[j] / g.L;
        s.psi1[i] = a * std::polar(1.0, ph);
        s.psi2[i] = b * std::polar(1.0, ph);
    }
    return s;
}

ComponentFunction fn(std::function<cplx(const Vec3&)> f) { return f; }

} // namespace

TEST_CASE("identification maps") {
    const Grid3D g(8, 9.0);
    const SpinorField psi = random_spinor(g, 1);
    const SuperWaveFunction u = sharp(psi);
    CHECK(u.u0 == psi.psi1);
    CHECK(u.u1 == psi.psi2);
    const SpinorField back = flat(u);
    CHECK(back.psi1 == psi.psi1);
    CHECK(back.psi2 == psi.psi2);
}

TEST_CASE("Pauli matrices") {
    const Grid3D g(8, 9.0);
    const SpinorField psi = random_spinor(g, 2);
    const SpinorField s1 = apply_pauli(1, psi), s2 = apply_pauli(2, psi), s3 = apply_pauli(3, psi);
    for (std::size_t i = 0; i < g.size(); i += 37) {
        CHECK(s1.psi1[i] == psi.psi2[i]);
        CHECK(s1.psi2[i] == psi.psi1[i]);
        CHECK(std::abs(s2.psi1[i] + I * psi.psi2[i]) == 0.0);
        CHECK(std::abs(s2.psi2[i] - I * psi.psi1[i]) == 0.0);
        CHECK(s3.psi1[i] == psi.psi1[i]);
        CHECK(s3.psi2[i] == -psi.psi2[i]);
    }
    CHECK_THROWS(apply_pauli(4, psi));
}

TEST_CASE("exact free propagator") {
    const Grid3D g(8, 9.0);
    const HamiltonianParams hp{0.8, 1.3, 0.0};
    const SpinorField psi = random_spinor(g, 3);

    CHECK(rel(exact_free_propagator(0.4, 0.4, psi, hp), psi) < 1e-14);
    CHECK(std::abs(norm(exact_free_propagator(0.0, 0.7, psi, hp)) / norm(psi) - 1.0) < 1e-12);
    const SpinorField two = exact_free_propagator(0.3, 0.7, exact_free_propagator(0.0, 0.3, psi, hp), hp);
    CHECK(rel(two, exact_free_propagator(0.0, 0.7, psi, hp)) < 1e-12);
    // backwards undoes forwards
    CHECK(rel(exact_free_propagator(0.5, 0.0, exact_free_propagator(0.0, 0.5, psi, hp), hp), psi) < 1e-12);

    // spin-up plane wave along q3 only picks up a phase
    const int m = 2;
    const double k = hp.hbar * 2.0 * M_PI * m / g.L, T = 0.6;
    const SpinorField up = plane(g, {0, 0, m}, 1.0, 0.0);
    const SpinorField out = exact_free_propagator(0.0, T, up, hp);
    CHECK(rel(out, plane(g, {0, 0, m}, std::exp(-I * hp.c * k * T / hp.hbar), 0.0)) < 1e-12);

    // the zero mode is left alone
    const SpinorField flat_mode = plane(g, {0, 0, 0}, 0.3, cplx(0.1, 0.2));
    CHECK(rel(exact_free_propagator(0.0, T, flat_mode, hp), flat_mode) < 1e-14);
}

TEST_CASE("exact free propagator solves the Weyl equation") {
    const Grid3D g(8, 9.0);
    const HamiltonianParams hp{1.0, 1.0, 0.0};
    const ZeroPotential zero;
    const SpinorField psi = random_spinor(g, 4);
    const double t = 0.3, h = 1e-4;
    SpinorField d = exact_free_propagator(0.0, t + h, psi, hp) - exact_free_propagator(0.0, t - h, psi, hp);
    const SpinorField H = weyl_rhs(t, exact_free_propagator(0.0, t, psi, hp), zero, hp);
    for (std::size_t i = 0; i < g.size(); ++i) {
        d.psi1[i] *= I * hp.hbar / (2 * h);
        d.psi2[i] *= I * hp.hbar / (2 * h);
    }
    CHECK(rel(d, H) < 1e-6);
}

TEST_CASE("split-step reference") {
    const Grid3D g(8, 9.0);
    const SpinorField psi = random_spinor(g, 5);

    const ZeroPotential zero;
    const HamiltonianParams free{1.0, 1.0, 0.0};
    CHECK(rel(split_step_reference(0.0, 0.5, psi, zero, free, 0.01), exact_free_propagator(0.0, 0.5, psi, free)) <
          1e-12);

    const HamiltonianParams hp{1.0, 1.0, 0.8};
    const SpinorField one = split_step_reference(0.0, 0.05, psi, bumps(), hp, 0.05);
    CHECK(std::abs(norm(one) / norm(psi) - 1.0) < 1e-12);

    // second order: halving the step quarters the error
    const double T = 0.2;
    const SpinorField ref = split_step_reference(0.0, T, psi, bumps(), hp, T / 256);
    const double e1 = norm(split_step_reference(0.0, T, psi, bumps(), hp, T / 8) - ref);
    const double e2 = norm(split_step_reference(0.0, T, psi, bumps(), hp, T / 16) - ref);
    CHECK(e1 / e2 > 3.6);
    CHECK(e1 / e2 < 4.4);
}

TEST_CASE("split-step with constant potentials against the shifted closed form") {
    const Grid3D g(8, 9.0);
    const std::array<int, 3> m{1, 0, -1};
    const HamiltonianParams hp{1.0, 1.0, 0.5};
    const Vec3 A{0.4, -0.3, 0.2};
    const double A0 = 0.3, T = 0.5;
    const FunctionPotential cst([&](const Vec3&) { return std::array<double, 4>{A0, A[0], A[1], A[2]}; });
    Vec3 eta;
    for (int j = 0; j < 3; ++j) eta[j] = hp.hbar * 2.0 * M_PI * m[j] / g.L - hp.epsilon * A[j] / hp.c;
    const double a = std::sqrt(eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2]);
    const double gam = hp.c * a * T / hp.hbar;
    const cplx p0(0.6, 0.1), p1(-0.2, 0.7);
    // exp(-i (c sigma.eta + eps A0) T / hbar)
    const cplx glob = std::exp(-I * hp.epsilon * A0 * T / hp.hbar);
    const cplx s = -I * std::sin(gam) / a;
    const cplx q0 = glob * (std::cos(gam) * p0 + s * (eta[2] * p0 + cplx(eta[0], -eta[1]) * p1));
    const cplx q1 = glob * (std::cos(gam) * p1 + s * (cplx(eta[0], eta[1]) * p0 - eta[2] * p1));
    const SpinorField out = split_step_reference(0.0, T, plane(g, m, p0, p1), cst, hp, 1e-3);
    CHECK(rel(out, plane(g, m, q0, q1)) < 1e-6);
}

TEST_CASE("Weyl operator") {
    const Grid3D g(8, 9.0);
    const HamiltonianParams hp{1.0, 1.0, 0.8};
    const SpinorField u = random_spinor(g, 6), v = random_spinor(g, 7);
    const SpinorField Hu = weyl_rhs(0.0, u, bumps(), hp), Hv = weyl_rhs(0.0, v, bumps(), hp);
    cplx a{}, b{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        a += std::conj(Hu.psi1[i]) * v.psi1[i] + std::conj(Hu.psi2[i]) * v.psi2[i];
        b += std::conj(u.psi1[i]) * Hv.psi1[i] + std::conj(u.psi2[i]) * Hv.psi2[i];
    }
    CHECK(std::abs(a - b) * g.cell_volume() < 1e-10 * norm(Hu) * norm(v));

    const ZeroPotential zero;
    const std::array<int, 3> m{0, 2, 1};
    Vec3 xi;
    for (int j = 0; j < 3; ++j) xi[j] = 2.0 * M_PI * m[j] / g.L;
    const cplx p0(1.0, 0.0), p1(0.0, 1.0);
    const SpinorField w = weyl_rhs(0.0, plane(g, m, p0, p1), zero, {1.0, 1.0, 0.0});
    const cplx e0 = xi[2] * p0 + cplx(xi[0], -xi[1]) * p1, e1 = cplx(xi[0], xi[1]) * p0 - xi[2] * p1;
    CHECK(rel(w, plane(g, m, e0, e1)) < 1e-12);
}

TEST_CASE("function potentials provide values only") {
    const FunctionPotential f([](const Vec3& q) { return std::array<double, 4>{q[0], 1.0, 2.0, 3.0}; });
    const auto j = f.jet(0.0, {0.5, 0.0, 0.0}, 0);
    CHECK(j[0].value == 0.5);
    CHECK(j[3].value == 3.0);
    CHECK_THROWS_AS(f.jet(0.0, {0.0, 0.0, 0.0}, 1), std::logic_error);
}

TEST_CASE("matrix potential reduction") {
    const std::vector<Vec3> samples{{0.0, 0.0, 0.0}, {0.5, -0.2, 1.0}, {-1.0, 0.3, 0.2}};
    auto zero = fn([](const Vec3&) { return cplx(0.0); });
    MatrixPotentialBlocks B;
    for (auto& row : B) row.fill(zero);

    // only the sigma_0 column: plain components
    B[0][0] = fn([](const Vec3& q) { return cplx(q[0]); });
    B[1][0] = fn([](const Vec3& q) { return cplx(q[1]); });
    B[3][0] = fn([](const Vec3&) { return cplx(-2.0); });
    auto r = matrix_potential_reduce(B, samples);
    CHECK(r.valid);
    REQUIRE(r.potential);
    const Vec3 q{0.5, -0.2, 1.0};
    CHECK(std::abs(r.components[1](q) - q[1]) == 0.0);
    CHECK(std::abs(r.components[3](q) + 2.0) == 0.0);
    const auto jet = r.potential->jet(0.0, q, 0);
    CHECK(jet[0].value == q[0]);
    CHECK(jet[1].value == q[1]);

    // A_2^[3] = f feeds an imaginary first component
    for (auto& row : B) row.fill(zero);
    B[2][3] = fn([](const Vec3& p) { return cplx(1.0 + p[2]); });
    r = matrix_potential_reduce(B, samples);
    CHECK(r.valid);
    CHECK(std::abs(r.components[1](q) - I * (1.0 + q[2])) == 0.0);
    CHECK(std::abs(r.components[0](q)) == 0.0);
    CHECK_FALSE(r.potential); // complex component: not a physical potential

    // the remaining cyclic terms
    for (auto& row : B) row.fill(zero);
    B[3][1] = fn([](const Vec3&) { return cplx(2.0); });
    B[1][2] = fn([](const Vec3&) { return cplx(5.0); });
    r = matrix_potential_reduce(B, samples);
    CHECK(std::abs(r.components[2](q) - 2.0 * I) == 0.0);
    CHECK(std::abs(r.components[3](q) - 5.0 * I) == 0.0);

    // complex diagonal violates the real-valued scalar potential premise
    for (auto& row : B) row.fill(zero);
    B[1][1] = fn([](const Vec3&) { return cplx(0.0, 1.0); });
    r = matrix_potential_reduce(B, samples);
    CHECK_FALSE(r.valid);
}
