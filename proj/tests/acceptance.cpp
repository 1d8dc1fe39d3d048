// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_algebra.hpp"
#include "scenarios.hpp"
#include "superweyl/superflow.hpp"

using namespace superweyl;
using namespace superweyl::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string list(const std::vector<double>& xs) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : " ") + fmt("%.3e", x);
    return s;
}

Outcome free_field() {
    std::mt19937_64 rng(20261016);
    std::vector<Vec3> xis;
    for (int k = 0; k < 50; ++k) xis.push_back(random_momentum(rng, 0.2, 3.0));
    const auto rep = free_check(xis, {0.1, 0.5, 1.0}, {1.0, 1.0, 0.0}, 1e-3);
    return {rep.max_error <= 1e-6, "max coefficient error " + fmt("%.3e", rep.max_error) + " (tol 1e-6)"};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(7);
    const GaussianBumpPotential pot = random_bump_potential(rng, 2, 0.6, 0.8);
    std::uniform_real_distribution<double> xs(-0.5, 0.5);
    std::vector<std::pair<Vec3, Vec3>> pts;
    for (int k = 0; k < 20; ++k) {
        const Vec3 x{xs(rng), xs(rng), xs(rng)};
        pts.emplace_back(x, random_momentum(rng, 0.2, 1.5));
    }
    const auto rep = oracle_compare(pts, {0.05, 0.1}, pot, {1.0, 1.0, 0.8}, 1e-3);
    const bool ok = rep.max_error_S <= 1e-5 && rep.max_error_D <= 1e-5;
    return {ok, "max error S " + fmt("%.3e", rep.max_error_S) + ", D " + fmt("%.3e", rep.max_error_D) + " (tol 1e-5)"};
}

Outcome convention_anchor() {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    double worst_sigma = 0.0, worst_fourier = 0.0;
    const double hbars[] = {1.0, 0.37, 2.5};
    for (int trial = 0; trial < 200; ++trial) {
        const cplx v0(d(rng), d(rng)), v1(d(rng), d(rng));
        const GrassmannNumber v = GrassmannNumber(v0) + GrassmannNumber::product_of({Theta1, Theta2}, v1);
        for (int j = 1; j <= 3; ++j) {
            // flat(sigma_j^ sharp psi) against the Pauli matrix on psi = (v0, v1)
            const GrassmannNumber w = pauli_differential(j, v);
            cplx e0, e1;
            if (j == 1) e0 = v1, e1 = v0;
            else if (j == 2) e0 = cplx(0, -1) * v1, e1 = cplx(0, 1) * v0;
            else e0 = v0, e1 = -v1;
            GrassmannNumber expect = GrassmannNumber(e0) + GrassmannNumber::product_of({Theta1, Theta2}, e1);
            worst_sigma = std::max(worst_sigma, distance(w, expect));
        }
        for (double h : hbars) {
            const GrassmannNumber back = super_fourier_odd_inverse(super_fourier_odd(v, h), h);
            worst_fourier = std::max(worst_fourier, distance(back, v));
        }
    }
    const bool ok = worst_sigma <= 1e-14 && worst_fourier <= 1e-14;
    return {ok, "sigma mismatch " + fmt("%.1e", worst_sigma) + ", odd Fourier round trip " + fmt("%.1e", worst_fourier)};
}

Outcome free_propagator_exactness() {
    // L = 32 keeps c |xi| (t - s) / hbar below pi/2 on the whole lattice
    const Grid3D g(16, 32.0);
    const HamiltonianParams hp{1.0, 1.0, 0.0};
    const SpinorField psi = band_limited_spinor(g, hp.hbar, 0.5);
    const ZeroPotential zero;
    const SpinorField ex = exact_free_propagator(0.0, 0.5, psi, hp);
    const SpinorField par = flat(apply_parametrix(0.0, 0.5, sharp(psi), zero, hp));
    const double rel = norm(par - ex) / norm(ex);
    return {rel <= 1e-8, "relative L2 error " + fmt("%.3e", rel) + " (tol 1e-8)"};
}

Outcome defect_order() {
    const Scenario sc = uniform_b_scenario();
    PropagatorOptions opt;
    opt.dt_coeff = 1e-2;
    const std::vector<double> d{0.002, 0.005, 0.01, 0.02, 0.05, 0.1};
    std::vector<double> e;
    for (const auto& p : defect_ladder(0.0, d, sc.u, uniform_b_potential(), sc.hp, 1e-4, opt)) e.push_back(p.error);
    const double slope = fit_loglog_slope(d, e);
    return {slope >= 0.9, "slope " + fmt("%.3f", slope) + " (>= 0.9); defect/|u|: " + list(e)};
}

Outcome composition_order() {
    const Scenario sc = uniform_b_scenario();
    PropagatorOptions opt;
    opt.dt_coeff = 1e-2;
    const std::vector<double> spans{0.2, 0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (const auto& p : composition_ladder(0.0, spans, sc.u, uniform_b_potential(), sc.hp, opt)) e.push_back(p.error);
    const double slope = fit_loglog_slope(spans, e);
    return {slope >= 1.8, "slope " + fmt("%.3f", slope) + " (>= 1.8); errors: " + list(e)};
}

Outcome trotter_convergence() {
    // a single slice of 0.4 on the L = 10 box meets a focal point at the corner momenta; L = 16 stays clear
    const Scenario sc = uniform_b_scenario(8, 16.0, 2.0);
    PropagatorOptions opt;
    opt.dt_coeff = 1e-2;
    const SpinorField ref = split_step_reference(0.0, 0.4, flat(sc.u), uniform_b_potential(), sc.hp, 1e-4);
    const auto pts = trotter_ladder(0.0, 0.4, {1, 2, 4, 8, 16}, sc.u, ref, uniform_b_potential(), sc.hp, opt);
    std::vector<double> mesh, err, dev;
    for (const auto& p : pts) {
        mesh.push_back(p.mesh);
        err.push_back(p.error);
        dev.push_back(std::abs(p.norm_ratio - 1.0));
    }
    const double slope = fit_loglog_slope(mesh, err);
    bool decreasing = true;
    for (std::size_t k = 1; k < err.size(); ++k) decreasing = decreasing && err[k] < err[k - 1];
    // |ratio - 1| <= C |Delta| with C fixed by the coarsest mesh (factor 2 slack)
    const double C = dev[0] / mesh[0];
    bool linear = true;
    for (std::size_t k = 0; k < dev.size(); ++k) linear = linear && dev[k] <= 2.0 * C * mesh[k] + 1e-12;
    const bool ok = slope >= 0.9 && decreasing && linear;
    return {ok, "slope " + fmt("%.3f", slope) + " (>= 0.9), errors: " + list(err) + "; |norm ratio - 1|: " + list(dev)};
}

Outcome algebra_properties() {
    std::mt19937_64 rng(11);
    const int cases = 10000;
    double worst[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < cases; ++i) {
        const auto a = random_element(rng, -1), b = random_element(rng, -1), c = random_element(rng, -1);
        worst[0] = std::max(worst[0], relative_distance((a * b) * c, a * (b * c)));

        const int p = static_cast<int>(rng() % 2), q = static_cast<int>(rng() % 2);
        const auto x = random_element(rng, p), y = random_element(rng, q);
        const double sign = (p && q) ? -1.0 : 1.0;
        worst[1] = std::max(worst[1], relative_distance(x * y, y * x * sign));

        const auto e = random_even_right_half(rng);
        worst[2] = std::max(worst[2], relative_distance(e * even_inverse(e), GrassmannNumber(1.0)));
        const auto r = even_sqrt(e);
        worst[3] = std::max(worst[3], relative_distance(r * r, e));

        const int k = static_cast<int>(rng() % 4);
        const auto lhs = odd_derivative(x * y, k);
        const auto rhs = odd_derivative(x, k) * y + x * odd_derivative(y, k) * (p ? -1.0 : 1.0);
        worst[5] = std::max(worst[5], relative_distance(lhs, rhs));
    }
    for (int i = 0; i < cases; ++i) {
        const int m = 1 + static_cast<int>(rng() % 2), n = 1 + static_cast<int>(rng() % 2);
        const SuperMatrix M = random_supermatrix(rng, m, n), N = random_supermatrix(rng, m, n);
        worst[4] = std::max(worst[4], relative_distance(sdet(M * N), sdet(M) * sdet(N)));
    }
    const char* names[] = {"assoc", "graded", "inverse", "sqrt", "sdet", "anti-Leibniz"};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 6; ++i) {
        ok = ok && worst[i] <= 1e-10;
        detail += std::string(i ? ", " : "") + names[i] + " " + fmt("%.1e", worst[i]);
    }
    return {ok, detail + " (tol 1e-10)"};
}

Outcome energy_conservation() {
    const HamiltonianParams hp{1.0, 1.0, 0.3};
    PhasePoint p;
    p.x = even_vec({0.3, -0.2, 0.1});
    p.xi = even_vec({0.7, -0.4, 0.5});
    p.x[0] += GrassmannNumber::product_of({Theta1, Pi2}, 0.2);
    p.xi[2] += GrassmannNumber::product_of({Theta2, Pi1}, -0.3);
    p.theta = {GrassmannNumber::generator(Theta1), GrassmannNumber::generator(Theta2)};
    p.pi = {GrassmannNumber::generator(Pi1), GrassmannNumber::generator(Pi2)};
    const auto traj = flow_integrate(0.0, 1.0, p, uniform_b_potential(), hp, 1e-3);
    const double drift = energy_drift(traj, uniform_b_potential(), hp);
    return {drift <= 1e-8, "max coefficient drift of H " + fmt("%.3e", drift) + " (tol 1e-8)"};
}

Outcome coefficient_smallness() {
    const HamiltonianParams hp{1.0, 1.0, 0.3};
    const std::vector<double> d{0.0125, 0.025, 0.05, 0.1, 0.2};
    const std::vector<std::pair<Vec3, Vec3>> pts{{{0.3, -0.2, 0.1}, {0.7, -0.4, 0.5}},
                                                 {{-1.0, 0.5, 0.0}, {0.2, 0.9, -0.3}},
                                                 {{0.8, 0.8, -0.4}, {-0.6, 0.1, 1.1}}};
    double worst = 1e9;
    std::string detail;
    for (const auto& [x, xi] : pts) {
        const auto cs = solve_coefficients(0.0, d, x, xi, uniform_b_potential(), hp, {1e-3});
        std::vector<double> e[4];
        for (const auto& c : cs) {
            e[0].push_back(std::abs(c.A.a00 - 1.0));
            e[1].push_back(std::abs(c.S.s10));
            e[2].push_back(std::abs(c.S.s01));
            e[3].push_back(std::abs(c.S.sc1d1 - 1.0));
        }
        for (auto& v : e) worst = std::min(worst, fit_loglog_slope(d, v));
    }
    return {worst >= 0.9, "smallest fitted slope " + fmt("%.3f", worst) + " (>= 0.9)"};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"free-field closed form", free_field},
        {"oracle equivalence", oracle_equivalence},
        {"convention anchor", convention_anchor},
        {"zero-coupling propagator exactness", free_propagator_exactness},
        {"defect order", defect_order},
        {"composition order", composition_order},
        {"time-slicing convergence", trotter_convergence},
        {"algebra property suite", algebra_properties},
        {"energy conservation", energy_conservation},
        {"coefficient smallness", coefficient_smallness},
    };
    const double budgets[] = {10, 60, 10, 60, 300, 600, 600, 10, 60, 60};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 10; ++i) which.push_back(i);

    int failures = 0;
    for (int k : which) {
        if (k < 1 || k > 10) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(k - 1)].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double budget = budgets[k - 1];
        const bool in_time = secs <= budget;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %d (%s): %s; %.1f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", k,
                    criteria[static_cast<std::size_t>(k - 1)].first.c_str(), o.detail.c_str(), secs, budget,
                    in_time ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
