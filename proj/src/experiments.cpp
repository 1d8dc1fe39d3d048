#include "superweyl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "superweyl/errors.hpp"
#include "superweyl/superflow.hpp"

namespace superweyl {

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> running_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> out(x.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = std::log(y[i] / y[i - 1]) / std::log(x[i] / x[i - 1]);
    return out;
}

Vec3 random_momentum(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), r(lo, hi);
    Vec3 d;
    double m = 0.0;
    do {
        d = {u(rng), u(rng), u(rng)};
        m = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    } while (m > 1.0 || m < 1e-3);
    const double len = r(rng);
    return {d[0] / m * len, d[1] / m * len, d[2] / m * len};
}

namespace {

double coefficient_error(const SCoefficients& a, const SCoefficients& b) {
    const cplx da[] = {a.s00, a.s10, a.s01, a.sc1d1, a.sc2d2, a.sc1d2, a.sc2d1, a.s11};
    const cplx db[] = {b.s00, b.s10, b.s01, b.sc1d1, b.sc2d2, b.sc1d2, b.sc2d1, b.s11};
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

double coefficient_error(const ACoefficients& a, const ACoefficients& b) {
    const cplx da[] = {a.a00, a.a10, a.a01, a.ac1d1, a.ac2d2, a.ac1d2, a.ac2d1, a.a11};
    const cplx db[] = {b.a00, b.a10, b.a01, b.ac1d1, b.ac2d2, b.ac1d2, b.ac2d1, b.a11};
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

} // namespace

FreeCheckReport free_check(const std::vector<Vec3>& momenta, const std::vector<double>& durations,
                           const HamiltonianParams& hp, double dt) {
    FreeCheckReport rep;
    const ZeroPotential zero;
    const Vec3 x{0.3, -0.2, 0.5};
    HamiltonianParams free = hp;
    free.epsilon = 0.0;
    for (const Vec3& xi : momenta) {
        std::vector<double> times = durations;
        std::sort(times.begin(), times.end());
        if (xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0) {
            for (double d : times) rep.rows.push_back({xi, d, 0.0, true});
            ++rep.skipped;
            continue;
        }
        CoefficientOptions co;
        co.dt = dt;
        const auto cs = solve_coefficients(0.0, times, x, xi, zero, free, co);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const FreeCoefficients ex = closed_form_free(0.0, times[k], x, xi, free);
            const double e = std::max(coefficient_error(cs[k].S, ex.S), coefficient_error(cs[k].A, ex.A));
            rep.rows.push_back({xi, times[k], e, false});
            rep.max_error = std::max(rep.max_error, e);
        }
    }
    return rep;
}

OracleReport oracle_compare(const std::vector<std::pair<Vec3, Vec3>>& points, const std::vector<double>& durations,
                            const EMPotential& pot, const HamiltonianParams& hp, double dt) {
    OracleReport rep;
    for (const auto& [x, xi] : points) {
        std::vector<double> times = durations;
        std::sort(times.begin(), times.end());
        CoefficientOptions co;
        co.dt = dt;
        const auto cs = solve_coefficients(0.0, times, x, xi, pot, hp, co);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const OracleResult o = oracle_phase_and_amplitude(0.0, times[k], x, xi, pot, hp, dt);
            const GrassmannNumber S = phase_element(cs[k].S);
            const GrassmannNumber A = amplitude_element(cs[k].A);
            const double eS = distance(o.S, S), eD = distance(o.D, A * A);
            rep.rows.push_back({x, xi, times[k], eS, eD});
            rep.max_error_S = std::max(rep.max_error_S, eS);
            rep.max_error_D = std::max(rep.max_error_D, eD);
        }
    }
    return rep;
}

GaussianBumpPotential random_bump_potential(std::mt19937_64& rng, int bumps_per_component, double amplitude,
                                            double spread) {
    std::uniform_real_distribution<double> a(-amplitude, amplitude), c(-spread, spread), w(0.7, 1.4);
    std::vector<GaussianBump> bumps;
    for (int comp = 0; comp < 4; ++comp)
        for (int k = 0; k < bumps_per_component; ++k) {
            GaussianBump b;
            b.component = comp;
            b.amplitude = a(rng);
            b.center = {c(rng), c(rng), c(rng)};
            b.width = w(rng);
            bumps.push_back(b);
        }
    return GaussianBumpPotential(std::move(bumps));
}

namespace {

// Kernels of the given durations from one coefficient sweep; only valid for
// time-independent potentials, where a kernel depends on the duration alone.
std::map<double, KernelMatrix> kernel_bank(std::vector<double> durations, const Grid3D& g, const EMPotential& pot,
                                           const HamiltonianParams& hp, const PropagatorOptions& opt) {
    std::sort(durations.begin(), durations.end());
    durations.erase(std::unique(durations.begin(), durations.end()), durations.end());
    auto ks = build_kernels(0.0, durations, g, pot, hp, opt);
    std::map<double, KernelMatrix> bank;
    for (std::size_t k = 0; k < durations.size(); ++k) bank.emplace(durations[k], std::move(ks[k]));
    return bank;
}

bool bank_fits(const EMPotential& pot, const Grid3D& g, std::size_t kernels, const PropagatorOptions& opt) {
    if (!pot.time_independent()) return false;
    if (pot.is_zero() && !opt.force_quadrature) return true;
    const double bytes = static_cast<double>(g.size()) * g.size() * sizeof(KernelEntry) * kernels;
    return bytes <= 2.0e9;
}

} // namespace

std::vector<LadderPoint> defect_ladder(double s, const std::vector<double>& durations, const SuperWaveFunction& u,
                                       const EMPotential& pot, const HamiltonianParams& hp, double dtau,
                                       const PropagatorOptions& opt) {
    std::vector<double> d = durations;
    std::sort(d.begin(), d.end());
    std::vector<double> ts;
    for (double x : d) ts.push_back(s + x);
    const auto defects = defect_norms(s, ts, u, pot, hp, dtau, opt);
    const double n0 = norm(u);
    std::vector<LadderPoint> out;
    for (std::size_t k = 0; k < d.size(); ++k) out.push_back({d[k], defects[k] / n0});
    return out;
}

std::vector<LadderPoint> composition_ladder(double s, const std::vector<double>& spans, const SuperWaveFunction& u,
                                            const EMPotential& pot, const HamiltonianParams& hp,
                                            const PropagatorOptions& opt) {
    const double n0 = norm(u);
    std::vector<LadderPoint> out;
    std::vector<double> durations;
    for (double T : spans) {
        durations.push_back(T);
        durations.push_back(0.5 * T);
    }
    if (bank_fits(pot, u.grid, durations.size(), opt)) {
        const auto bank = kernel_bank(durations, u.grid, pot, hp, opt);
        for (double T : spans) {
            const KernelMatrix& half = bank.at(0.5 * T);
            const SuperWaveFunction two = apply_kernel(half, apply_kernel(half, u, opt), opt);
            const SuperWaveFunction one = apply_kernel(bank.at(T), u, opt);
            out.push_back({T, norm(two - one) / n0});
        }
        return out;
    }
    for (double T : spans) {
        const auto first = apply_parametrix(s, {s + 0.5 * T, s + T}, u, pot, hp, opt);
        const SuperWaveFunction two = apply_parametrix(s + 0.5 * T, s + T, first[0], pot, hp, opt);
        out.push_back({T, norm(two - first[1]) / n0});
    }
    return out;
}

std::vector<TrotterPoint> trotter_ladder(double s, double t, const std::vector<int>& slices,
                                         const SuperWaveFunction& u, const SpinorField& reference,
                                         const EMPotential& pot, const HamiltonianParams& hp,
                                         const PropagatorOptions& opt) {
    const double n0 = norm(u);
    const SuperWaveFunction ref = sharp(reference);
    std::vector<TrotterPoint> out;
    std::vector<double> durations;
    for (int N : slices) durations.push_back((t - s) / N);
    const bool bank_ok = bank_fits(pot, u.grid, durations.size(), opt);
    std::map<double, KernelMatrix> bank;
    if (bank_ok) bank = kernel_bank(durations, u.grid, pot, hp, opt);
    for (int N : slices) {
        SuperWaveFunction v;
        if (bank_ok) {
            const KernelMatrix& k = bank.at((t - s) / N);
            v = u;
            for (int i = 0; i < N; ++i) v = apply_kernel(k, v, opt);
        } else {
            v = trotter_compose(uniform_subdivision(s, t, N), u, pot, hp, opt);
        }
        out.push_back({N, std::abs(t - s) / N, norm(v - ref) / n0, norm(v) / n0});
    }
    return out;
}

Field band_limit(const Grid3D& g, const Field& u, double fraction) {
    const SpectralTransform ft(g, 1.0);
    Field h = ft.forward(u);
    const double cut = fraction * (g.n / 2);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz)
                if (std::abs(g.frequency(ix)) > cut || std::abs(g.frequency(iy)) > cut ||
                    std::abs(g.frequency(iz)) > cut)
                    h[g.index(ix, iy, iz)] = 0.0;
    return ft.inverse(h);
}

} // namespace superweyl
