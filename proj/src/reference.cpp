#include "superweyl/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "superweyl/parallel.hpp"

namespace superweyl {

namespace {

constexpr cplx I{0.0, 1.0};

// sigma . v as a 2x2 matrix
Matrix2c sigma_dot(const std::array<cplx, 3>& v) {
    return {{{v[2], v[0] - I * v[1]}, {v[0] + I * v[1], -v[2]}}};
}

void apply_pointwise(const Matrix2c& m, cplx& a, cplx& b) {
    const cplx x = m[0][0] * a + m[0][1] * b;
    const cplx y = m[1][0] * a + m[1][1] * b;
    a = x;
    b = y;
}

// exp(-i (eps A0 - eps sigma.A) tau / hbar) at every node
void potential_step(SpinorField& psi, double t, double tau, const EMPotential& pot, const HamiltonianParams& hp,
                    int threads) {
    const Grid3D& g = psi.grid;
    parallel_for(g.size(), threads, [&](std::size_t i, std::size_t) {
        PotentialJet A{};
        pot.evaluate(t, g.node(i), 0, A);
        const double a1 = A[1].value, a2 = A[2].value, a3 = A[3].value;
        const double mag = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
        const double arg = hp.epsilon * mag * tau / hp.hbar;
        const cplx scalar = std::polar(1.0, -hp.epsilon * A[0].value * tau / hp.hbar);
        Matrix2c m{{{1.0, 0.0}, {0.0, 1.0}}};
        if (mag > 0.0) {
            const Matrix2c sa = sigma_dot({a1 / mag, a2 / mag, a3 / mag});
            const double c = std::cos(arg), s = std::sin(arg);
            for (int r = 0; r < 2; ++r)
                for (int q = 0; q < 2; ++q) m[r][q] = (r == q ? c : 0.0) + I * s * sa[r][q];
        }
        for (auto& row : m)
            for (auto& z : row) z *= scalar;
        apply_pointwise(m, psi.psi1[i], psi.psi2[i]);
    });
}

} // namespace

double norm(const SpinorField& psi) { return l2_norm(psi.grid, psi.psi1, psi.psi2); }

SpinorField operator-(const SpinorField& a, const SpinorField& b) {
    SpinorField r = a;
    for (std::size_t i = 0; i < r.psi1.size(); ++i) {
        r.psi1[i] -= b.psi1[i];
        r.psi2[i] -= b.psi2[i];
    }
    return r;
}

SuperWaveFunction sharp(const SpinorField& psi) { return SuperWaveFunction(psi.grid, psi.psi1, psi.psi2); }

SpinorField flat(const SuperWaveFunction& u) { return SpinorField(u.grid, u.u0, u.u1); }

SpinorField apply_pauli(int j, const SpinorField& psi) {
    if (j < 1 || j > 3) throw std::invalid_argument("pauli index must be 1, 2 or 3");
    std::array<cplx, 3> e{};
    e[static_cast<std::size_t>(j - 1)] = 1.0;
    const Matrix2c m = sigma_dot(e);
    SpinorField out = psi;
    for (std::size_t i = 0; i < out.psi1.size(); ++i) apply_pointwise(m, out.psi1[i], out.psi2[i]);
    return out;
}

SpinorField exact_free_propagator(double s, double t, const SpinorField& psi, const HamiltonianParams& hp,
                                  int threads) {
    const Grid3D& g = psi.grid;
    const SpectralTransform ft(g, hp.hbar);
    Field h1 = ft.forward(psi.psi1), h2 = ft.forward(psi.psi2);
    parallel_for(g.size(), threads, [&](std::size_t j, std::size_t) {
        const Vec3 xi = g.momentum(j, hp.hbar);
        const double mag = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        if (mag == 0.0) return;
        const double gamma = hp.c * (t - s) * mag / hp.hbar;
        const Matrix2c sx = sigma_dot({xi[0] / mag, xi[1] / mag, xi[2] / mag});
        const double c = std::cos(gamma), sn = std::sin(gamma);
        Matrix2c m;
        for (int r = 0; r < 2; ++r)
            for (int q = 0; q < 2; ++q) m[r][q] = (r == q ? c : 0.0) - I * sn * sx[r][q];
        apply_pointwise(m, h1[j], h2[j]);
    });
    return SpinorField(g, ft.inverse(h1), ft.inverse(h2));
}

SpinorField split_step_reference(double s, double t, const SpinorField& psi, const EMPotential& pot,
                                 const HamiltonianParams& hp, double dt, int threads) {
    if (!(dt > 0.0)) throw std::invalid_argument("split step: dt must be positive");
    const int steps = t == s ? 0 : std::max(1, static_cast<int>(std::ceil(std::abs(t - s) / dt - 1e-9)));
    const double h = steps ? (t - s) / steps : 0.0;
    SpinorField v = psi;
    const bool free = pot.is_zero();
    for (int k = 0; k < steps; ++k) {
        const double t0 = s + k * h;
        if (!free) potential_step(v, t0, 0.5 * h, pot, hp, threads);
        v = exact_free_propagator(t0, t0 + h, v, hp, threads);
        if (!free) potential_step(v, t0 + h, 0.5 * h, pot, hp, threads);
    }
    return v;
}

SpinorField weyl_rhs(double t, const SpinorField& psi, const EMPotential& pot, const HamiltonianParams& hp) {
    const Grid3D& g = psi.grid;
    const std::size_t N = g.size();
    const SpectralTransform ft(g, hp.hbar);
    std::vector<PotentialJet> A(N);
    for (std::size_t i = 0; i < N; ++i) pot.evaluate(t, g.node(i), 0, A[i]);

    // P_k psi for each component
    std::array<std::array<Field, 2>, 3> P;
    for (int k = 0; k < 3; ++k) {
        P[k][0] = ft.momentum_derivative(psi.psi1, k);
        P[k][1] = ft.momentum_derivative(psi.psi2, k);
        for (std::size_t i = 0; i < N; ++i) {
            const double a = (hp.epsilon / hp.c) * A[i][static_cast<std::size_t>(k) + 1].value;
            P[k][0][i] -= a * psi.psi1[i];
            P[k][1][i] -= a * psi.psi2[i];
        }
    }
    SpinorField out(g);
    for (std::size_t i = 0; i < N; ++i) {
        const cplx p1 = P[0][0][i], q1 = P[0][1][i];
        const cplx p2 = P[1][0][i], q2 = P[1][1][i];
        const cplx p3 = P[2][0][i], q3 = P[2][1][i];
        const double v = hp.epsilon * A[i][0].value;
        // sigma1 (p,q) = (q,p); sigma2 (p,q) = (-i q, i p); sigma3 (p,q) = (p,-q)
        out.psi1[i] = hp.c * (q1 - I * q2 + p3) + v * psi.psi1[i];
        out.psi2[i] = hp.c * (p1 + I * p2 - q3) + v * psi.psi2[i];
    }
    return out;
}

void FunctionPotential::evaluate(double, const Vec3& q, int order, PotentialJet& out) const {
    if (order > 0) throw std::logic_error("function potential provides values only");
    const auto v = f_(q);
    for (std::size_t k = 0; k < 4; ++k) out[k].value = v[k];
}

ReducedPotential matrix_potential_reduce(const MatrixPotentialBlocks& blocks, const std::vector<Vec3>& samples,
                                         double tol) {
    const auto B = blocks; // A_j^[k] = B[j][k]
    ReducedPotential r;
    r.components[0] = [B](const Vec3& q) { return B[0][0](q) + B[1][1](q) + B[2][2](q) + B[3][3](q); };
    // tilde A_j = A_j^[0] + A_0^[j] + i (A_{j+1}^[j+2] - A_{j+2}^[j+1]), indices cyclic in 1..3
    for (int j = 1; j <= 3; ++j) {
        const int a = j % 3 + 1, b = (j + 1) % 3 + 1;
        r.components[static_cast<std::size_t>(j)] = [B, j, a, b](const Vec3& q) {
            return B[j][0](q) + B[0][j](q) + I * (B[a][b](q) - B[b][a](q));
        };
    }
    bool real0 = true, all_real = true;
    for (const Vec3& q : samples) {
        if (std::abs(r.components[0](q).imag()) > tol) real0 = false;
        for (int j = 1; j <= 3; ++j)
            if (std::abs(r.components[static_cast<std::size_t>(j)](q).imag()) > tol) all_real = false;
    }
    r.valid = real0;
    if (real0 && all_real) {
        const auto comps = r.components;
        r.potential = std::make_shared<FunctionPotential>([comps](const Vec3& q) {
            return std::array<double, 4>{comps[0](q).real(), comps[1](q).real(), comps[2](q).real(),
                                         comps[3](q).real()};
        });
    }
    return r;
}

} // namespace superweyl
