#include <cmath>
#include <random>

#include "doctest.h"
#include "superweyl/grid.hpp"
#include "superweyl/parallel.hpp"
#include "superweyl/potential.hpp"

using namespace superweyl;

TEST_CASE("grid geometry") {
    const Grid3D g(8, 10.0);
    CHECK(g.size() == 512);
    CHECK(g.node(g.index(4, 4, 4)) == Vec3{0.0, 0.0, 0.0});
    CHECK(g.coordinate(0) == -5.0);
    CHECK(g.frequency(5) == -3);
    CHECK(std::abs(g.cell_volume() * static_cast<double>(g.size()) - 1000.0) < 1e-12);
    const Vec3 p = g.momentum(g.index(1, 7, 0), 0.5);
    CHECK(std::abs(p[0] - 0.5 * 2 * M_PI / 10.0) < 1e-15);
    CHECK(std::abs(p[1] + 0.5 * 2 * M_PI / 10.0) < 1e-15);
    CHECK_THROWS(Grid3D(7, 1.0));
    CHECK_THROWS(Grid3D(8, 0.0));
}

TEST_CASE("spectral transform") {
    const Grid3D g(8, 7.0);
    const double hbar = 0.6;
    const SpectralTransform F(g, hbar);
    const Field u = gaussian_packet(g, {0.3, -0.2, 0.1}, 1.1, {0.4, 0.2, -0.3}, hbar);
    const Field back = F.inverse(F.forward(u));
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(back[i] - u[i]));
    CHECK(err < 1e-13);

    // Parseval in the physical normalisation
    const Field uh = F.forward(u);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        a += std::norm(u[i]);
        b += std::norm(uh[i]);
    }
    CHECK(std::abs(std::sqrt(a * g.cell_volume()) / std::sqrt(b * g.momentum_cell(hbar)) - 1.0) < 1e-13);

    // -i hbar d/dx on a plane wave
    Field pw(g.size());
    const int m = 2;
    for (std::size_t i = 0; i < g.size(); ++i) pw[i] = std::polar(1.0, 2 * M_PI * m * g.node(i)[1] / g.L);
    const Field d = F.momentum_derivative(pw, 1);
    const double k = hbar * 2 * M_PI * m / g.L;
    err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d[i] - k * pw[i]));
    CHECK(err < 1e-13);
}

TEST_CASE("pairwise summation") {
    std::vector<cplx> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(1.0 / (1.0 + i), static_cast<double>(i % 3));
    cplx naive{};
    for (const cplx& z : v) naive += z;
    CHECK(std::abs(pairwise_sum(v.data(), v.size()) - naive) < 1e-12);
    CHECK(pairwise_sum(v.data(), 0) == cplx{});
}

TEST_CASE("parallel loop covers every index once and rethrows") {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i, std::size_t) { ++hits[i]; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i, std::size_t) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

namespace {

// compare every supplied derivative against central differences of the next lower order
void check_jets(const EMPotential& pot, const Vec3& q) {
    const double h = 1e-5;
    const PotentialJet J = pot.jet(0.0, q, 3);
    for (int j = 0; j < 3; ++j) {
        Vec3 a = q, b = q;
        a[j] += h;
        b[j] -= h;
        const PotentialJet P = pot.jet(0.0, a, 3), M = pot.jet(0.0, b, 3);
        for (int c = 0; c < 4; ++c) {
            const double scale = 1.0 + std::abs(J[c].value);
            CHECK(std::abs((P[c].value - M[c].value) / (2 * h) - J[c].d1[j]) < 1e-8 * scale);
            for (int k = 0; k < 3; ++k) {
                CHECK(std::abs((P[c].d1[k] - M[c].d1[k]) / (2 * h) - J[c].d2[j][k]) < 1e-7 * scale);
                for (int l = 0; l < 3; ++l)
                    CHECK(std::abs((P[c].d2[k][l] - M[c].d2[k][l]) / (2 * h) - J[c].d3[j][k][l]) < 1e-6 * scale);
            }
        }
    }
}

} // namespace

TEST_CASE("potential jets match finite differences") {
    const Vec3 q{0.3, -0.4, 0.25};
    check_jets(ConstantScalarPotential(0.7), q);
    check_jets(LinearScalarPotential({0.2, -0.5, 0.3}), q);
    check_jets(UniformMagneticPotential(0.5), q);
    const auto bumps = std::make_shared<GaussianBumpPotential>(std::vector<GaussianBump>{
        {0, 0.7, {0.2, -0.1, 0.3}, 0.8}, {1, 0.5, {-0.3, 0.2, 0.1}, 0.9}, {3, 0.6, {0.0, -0.3, 0.2}, 1.1}});
    check_jets(*bumps, q);
    const SumPotential sum({bumps, std::make_shared<UniformMagneticPotential>(0.2)});
    check_jets(sum, q);
}

TEST_CASE("potential values and flags") {
    const UniformMagneticPotential b(0.5);
    const auto J = b.jet(0.0, {1.0, 2.0, 3.0});
    CHECK(J[1].value == -0.5);
    CHECK(J[2].value == 0.25);
    CHECK(J[3].value == 0.0);
    // field strength B_12 = d1 A2 - d2 A1
    CHECK(J[2].d1[0] - J[1].d1[1] == 0.5);
    CHECK_FALSE(b.satisfies_growth_bounds());
    CHECK(ZeroPotential().is_zero());
    CHECK(UniformMagneticPotential(0.0).is_zero());
    CHECK(GaussianBumpPotential({}).is_zero());
    CHECK(GaussianBumpPotential({{2, 1.0, {0, 0, 0}, 1.0}}).satisfies_growth_bounds());
    const auto L = LinearScalarPotential({1.0, 2.0, 3.0}).jet(0.0, {1.0, 1.0, 1.0});
    CHECK(L[0].value == 6.0);
}
