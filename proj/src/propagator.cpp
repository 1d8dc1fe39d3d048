#include "superweyl/propagator.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "superweyl/errors.hpp"
#include "superweyl/parallel.hpp"

namespace superweyl {

namespace {

constexpr cplx I{0.0, 1.0};

void require_same_grid(const Grid3D& a, const Grid3D& b) {
    if (a.n != b.n || a.L != b.L) throw std::invalid_argument("grid mismatch");
}

double quadrature_weight(const Grid3D& g, double hbar) {
    return g.momentum_cell(hbar) / std::pow(2.0 * std::numbers::pi * hbar, 1.5);
}

bool use_multiplier(const EMPotential& pot, const PropagatorOptions& opt) {
    return pot.is_zero() && !opt.force_quadrature;
}

CoefficientOptions coefficient_options(const PropagatorOptions& opt) {
    CoefficientOptions co;
    co.dt = opt.dt_coeff;
    co.blowup_threshold = opt.blowup_threshold;
    co.max_rate_step = opt.max_rate_step;
    return co;
}

std::vector<CoefficientSet> solve_or_step_error(double s, const std::vector<double>& times, const Vec3& x,
                                                const Vec3& xi, const EMPotential& pot,
                                                const HamiltonianParams& hp, const CoefficientOptions& co) {
    try {
        return solve_coefficients(s, times, x, xi, pot, hp, co);
    } catch (const RiccatiBlowup& e) {
        throw StepTooLarge(std::string("parametrix step too long: ") + e.what() + "; increase slices");
    } catch (const NoConvergence& e) {
        throw StepTooLarge(std::string("parametrix step too long: ") + e.what() + "; increase slices");
    }
}

void check_times(double s, const std::vector<double>& times) {
    double prev = s;
    for (double t : times) {
        if (std::abs(t - s) < std::abs(prev - s) || (t - s) * (prev - s) < 0.0)
            throw std::invalid_argument("times must move monotonically away from s");
        prev = t;
    }
}

} // namespace

SuperWaveFunction::SuperWaveFunction(const Grid3D& g, Field a, Field b) : grid(g), u0(std::move(a)), u1(std::move(b)) {
    if (u0.size() != g.size() || u1.size() != g.size()) throw std::invalid_argument("field size does not match grid");
}

SuperWaveFunction& SuperWaveFunction::operator+=(const SuperWaveFunction& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t i = 0; i < u0.size(); ++i) {
        u0[i] += o.u0[i];
        u1[i] += o.u1[i];
    }
    return *this;
}

SuperWaveFunction& SuperWaveFunction::operator-=(const SuperWaveFunction& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t i = 0; i < u0.size(); ++i) {
        u0[i] -= o.u0[i];
        u1[i] -= o.u1[i];
    }
    return *this;
}

SuperWaveFunction& SuperWaveFunction::operator*=(cplx s) {
    for (auto& z : u0) z *= s;
    for (auto& z : u1) z *= s;
    return *this;
}

SuperWaveFunction operator+(SuperWaveFunction a, const SuperWaveFunction& b) { return a += b; }
SuperWaveFunction operator-(SuperWaveFunction a, const SuperWaveFunction& b) { return a -= b; }
SuperWaveFunction operator*(cplx s, SuperWaveFunction a) { return a *= s; }

double norm(const SuperWaveFunction& u) { return l2_norm(u.grid, u.u0, u.u1); }

SuperSpectrum super_fft(const SuperWaveFunction& u, double hbar) {
    const SpectralTransform ft(u.grid, hbar);
    const Field h0 = ft.forward(u.u0), h1 = ft.forward(u.u1);
    SuperSpectrum w{u.grid, Field(h0.size()), Field(h0.size())};
    for (std::size_t i = 0; i < h0.size(); ++i) std::tie(w.w0[i], w.w1[i]) = super_fourier_odd(h0[i], h1[i], hbar);
    return w;
}

SuperWaveFunction super_ifft(const SuperSpectrum& w, double hbar) {
    const SpectralTransform ft(w.grid, hbar);
    Field h0(w.w0.size()), h1(w.w0.size());
    for (std::size_t i = 0; i < h0.size(); ++i) std::tie(h0[i], h1[i]) = super_fourier_odd_inverse(w.w0[i], w.w1[i], hbar);
    return SuperWaveFunction(w.grid, ft.inverse(h0), ft.inverse(h1));
}

KernelEntry kernel_entry(const CoefficientSet& cs, double hbar) {
    const ACoefficients& a = cs.A;
    const SCoefficients& S = cs.S;
    const cplx ih = I / hbar;
    const double h2 = hbar * hbar;
    KernelEntry e;
    // components of A exp(i S_soul / hbar), weighted by the odd transform of the input
    e.b00 = a.a00;
    e.b10 = a.a10 + ih * a.a00 * S.s10;
    e.b01 = h2 * (a.a01 + ih * a.a00 * S.s01);
    const cplx cross = a.a00 * S.s11 + a.a10 * S.s01 + a.a01 * S.s10 - a.ac1d1 * S.sc2d2 - a.ac2d2 * S.sc1d1 +
                       a.ac1d2 * S.sc2d1 + a.ac2d1 * S.sc1d2;
    const cplx quad = S.s10 * S.s01 - S.sc1d1 * S.sc2d2 + S.sc1d2 * S.sc2d1;
    e.b11 = h2 * a.a11 + I * hbar * cross - a.a00 * quad;
    e.phase = std::exp(ih * S.s00);
    return e;
}

std::vector<KernelMatrix> build_kernels(double s, const std::vector<double>& times, const Grid3D& grid,
                                        const EMPotential& pot, const HamiltonianParams& hp,
                                        const PropagatorOptions& opt) {
    check_times(s, times);
    const bool mult = use_multiplier(pot, opt);
    const std::size_t N = grid.size();
    std::vector<KernelMatrix> ks(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        ks[k].grid = grid;
        ks[k].s = s;
        ks[k].t = times[k];
        ks[k].hbar = hp.hbar;
        ks[k].multiplier = mult;
        ks[k].entries.resize(mult ? N : N * N);
    }
    const CoefficientOptions co = coefficient_options(opt);
    const Vec3 origin{};
    if (mult) {
        parallel_for(N, opt.threads, [&](std::size_t j, std::size_t) {
            const auto cs = solve_or_step_error(s, times, origin, grid.momentum(j, hp.hbar), pot, hp, co);
            for (std::size_t k = 0; k < times.size(); ++k) {
                KernelEntry e = kernel_entry(cs[k], hp.hbar);
                e.phase = 1.0;
                ks[k].entries[j] = e;
            }
        });
        return ks;
    }
    parallel_for(N, opt.threads, [&](std::size_t ix, std::size_t) {
        const Vec3 x = grid.node(ix);
        for (std::size_t j = 0; j < N; ++j) {
            const auto cs = solve_or_step_error(s, times, x, grid.momentum(j, hp.hbar), pot, hp, co);
            for (std::size_t k = 0; k < times.size(); ++k) ks[k].entries[ix * N + j] = kernel_entry(cs[k], hp.hbar);
        }
    });
    return ks;
}

KernelMatrix build_kernel(double s, double t, const Grid3D& grid, const EMPotential& pot, const HamiltonianParams& hp,
                          const PropagatorOptions& opt) {
    return std::move(build_kernels(s, {t}, grid, pot, hp, opt).front());
}

SuperWaveFunction apply_kernel(const KernelMatrix& k, const SuperWaveFunction& u, const PropagatorOptions& opt) {
    require_same_grid(k.grid, u.grid);
    const Grid3D& g = k.grid;
    const std::size_t N = g.size();
    const SpectralTransform ft(g, k.hbar);
    const Field h0 = ft.forward(u.u0), h1 = ft.forward(u.u1);

    if (k.multiplier) {
        Field v0(N), v1(N);
        for (std::size_t j = 0; j < N; ++j) {
            const KernelEntry& e = k.entries[j];
            v0[j] = e.b00 * h0[j] + e.b01 * h1[j];
            v1[j] = e.b10 * h0[j] + e.b11 * h1[j];
        }
        return SuperWaveFunction(g, ft.inverse(v0), ft.inverse(v1));
    }

    const double w = quadrature_weight(g, k.hbar);
    SuperWaveFunction out(g);
    const std::size_t workers = worker_count(N, opt.threads);
    std::vector<Field> buf0(workers, Field(N)), buf1(workers, Field(N));
    parallel_for(N, opt.threads, [&](std::size_t ix, std::size_t wk) {
        Field& t0 = buf0[wk];
        Field& t1 = buf1[wk];
        const KernelEntry* row = &k.entries[ix * N];
        for (std::size_t j = 0; j < N; ++j) {
            const KernelEntry& e = row[j];
            t0[j] = e.phase * (e.b00 * h0[j] + e.b01 * h1[j]);
            t1[j] = e.phase * (e.b10 * h0[j] + e.b11 * h1[j]);
        }
        out.u0[ix] = w * pairwise_sum(t0.data(), N);
        out.u1[ix] = w * pairwise_sum(t1.data(), N);
    });
    return out;
}

std::vector<SuperWaveFunction> apply_parametrix(double s, const std::vector<double>& times, const SuperWaveFunction& u,
                                                const EMPotential& pot, const HamiltonianParams& hp,
                                                const PropagatorOptions& opt) {
    check_times(s, times);
    const Grid3D& g = u.grid;
    std::vector<SuperWaveFunction> outs;
    outs.reserve(times.size());
    if (use_multiplier(pot, opt)) {
        for (const auto& k : build_kernels(s, times, g, pot, hp, opt)) outs.push_back(apply_kernel(k, u, opt));
        return outs;
    }

    // streaming quadrature: coefficients for one output node at a time, never stored
    const std::size_t N = g.size(), T = times.size();
    const SpectralTransform ft(g, hp.hbar);
    const Field h0 = ft.forward(u.u0), h1 = ft.forward(u.u1);
    const double w = quadrature_weight(g, hp.hbar);
    const CoefficientOptions co = coefficient_options(opt);
    for (std::size_t k = 0; k < T; ++k) outs.emplace_back(g);

    const std::size_t workers = worker_count(N, opt.threads);
    std::vector<Field> scratch(workers, Field(2 * T * N));
    parallel_for(N, opt.threads, [&](std::size_t ix, std::size_t wk) {
        cplx* buf = scratch[wk].data();
        const Vec3 x = g.node(ix);
        for (std::size_t j = 0; j < N; ++j) {
            const auto cs = solve_or_step_error(s, times, x, g.momentum(j, hp.hbar), pot, hp, co);
            for (std::size_t k = 0; k < T; ++k) {
                const KernelEntry e = kernel_entry(cs[k], hp.hbar);
                buf[(2 * k) * N + j] = e.phase * (e.b00 * h0[j] + e.b01 * h1[j]);
                buf[(2 * k + 1) * N + j] = e.phase * (e.b10 * h0[j] + e.b11 * h1[j]);
            }
        }
        for (std::size_t k = 0; k < T; ++k) {
            outs[k].u0[ix] = w * pairwise_sum(buf + (2 * k) * N, N);
            outs[k].u1[ix] = w * pairwise_sum(buf + (2 * k + 1) * N, N);
        }
    });
    return outs;
}

SuperWaveFunction apply_parametrix(double s, double t, const SuperWaveFunction& u, const EMPotential& pot,
                                   const HamiltonianParams& hp, const PropagatorOptions& opt) {
    return std::move(apply_parametrix(s, std::vector<double>{t}, u, pot, hp, opt).front());
}

SuperWaveFunction apply_hamiltonian(double t, const SuperWaveFunction& u, const EMPotential& pot,
                                    const HamiltonianParams& hp) {
    const Grid3D& g = u.grid;
    const std::size_t N = g.size();
    const OddVec theta{GrassmannNumber::generator(Theta1), GrassmannNumber::generator(Theta2)};
    const OddVec pi{GrassmannNumber::generator(Pi1), GrassmannNumber::generator(Pi2)};
    const EvenVec sig = sigma_symbols(theta, pi, hp.hbar);
    std::array<Matrix2c, 3> M;
    for (std::size_t k = 0; k < 3; ++k) M[k] = odd_left_quantization(sig[k], hp.hbar);
    M[2][0][0] += 1.0;
    M[2][1][1] += 1.0;

    std::vector<PotentialJet> A(N);
    if (!pot.is_zero())
        for (std::size_t i = 0; i < N; ++i) pot.evaluate(t, g.node(i), 0, A[i]);

    const SpectralTransform ft(g, hp.hbar);
    const std::array<const Field*, 2> comp{&u.u0, &u.u1};
    SuperWaveFunction out(g);
    std::array<Field*, 2> dst{&out.u0, &out.u1};
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t a = 0; a < 2; ++a) {
            // P_k u_a = (-i hbar d_k - (eps/c) A_k) u_a
            Field p = ft.momentum_derivative(*comp[a], static_cast<int>(k));
            for (std::size_t i = 0; i < N; ++i) p[i] -= (hp.epsilon / hp.c) * A[i][k + 1].value * (*comp[a])[i];
            for (std::size_t b = 0; b < 2; ++b) {
                const cplx m = hp.c * M[k][b][a];
                if (m == cplx{}) continue;
                for (std::size_t i = 0; i < N; ++i) (*dst[b])[i] += m * p[i];
            }
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        const double v = hp.epsilon * A[i][0].value;
        out.u0[i] += v * u.u0[i];
        out.u1[i] += v * u.u1[i];
    }
    return out;
}

std::vector<double> defect_norms(double s, const std::vector<double>& ts, const SuperWaveFunction& u,
                                 const EMPotential& pot, const HamiltonianParams& hp, double dtau,
                                 const PropagatorOptions& opt) {
    if (!(dtau > 0.0)) throw std::invalid_argument("defect: dtau must be positive");
    std::vector<double> times;
    for (double t : ts) {
        if (std::abs(t - s) <= dtau) throw std::invalid_argument("defect: need |t - s| > dtau");
        const double dir = t > s ? 1.0 : -1.0;
        times.insert(times.end(), {t - dir * dtau, t, t + dir * dtau});
    }
    const auto us = apply_parametrix(s, times, u, pot, hp, opt);
    std::vector<double> out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double dir = ts[k] > s ? 1.0 : -1.0;
        SuperWaveFunction r = (I * hp.hbar * dir / (2.0 * dtau)) * (us[3 * k + 2] - us[3 * k]);
        r -= apply_hamiltonian(ts[k], us[3 * k + 1], pot, hp);
        out.push_back(norm(r));
    }
    return out;
}

double defect_norm(double s, double t, const SuperWaveFunction& u, const EMPotential& pot, const HamiltonianParams& hp,
                   double dtau, const PropagatorOptions& opt) {
    return defect_norms(s, {t}, u, pot, hp, dtau, opt).front();
}

std::vector<double> uniform_subdivision(double s, double t, int slices) {
    if (slices < 1) throw std::invalid_argument("subdivision needs at least one slice");
    std::vector<double> d(static_cast<std::size_t>(slices) + 1);
    for (int k = 0; k <= slices; ++k) d[static_cast<std::size_t>(k)] = s + (t - s) * k / slices;
    d.back() = t;
    return d;
}

SuperWaveFunction trotter_compose(const std::vector<double>& subdivision, const SuperWaveFunction& u,
                                  const EMPotential& pot, const HamiltonianParams& hp, const PropagatorOptions& opt,
                                  const SliceObserver& observe) {
    if (subdivision.size() < 2) throw std::invalid_argument("subdivision needs at least two points");
    const double dir = subdivision.back() >= subdivision.front() ? 1.0 : -1.0;
    for (std::size_t k = 1; k < subdivision.size(); ++k)
        if (dir * (subdivision[k] - subdivision[k - 1]) <= 0.0)
            throw std::invalid_argument("subdivision must be strictly monotone");

    // with a time-independent potential the kernel only depends on the slice length;
    // cache kernels when they fit in memory
    const std::size_t N = u.grid.size();
    const bool cache = pot.time_independent() && (use_multiplier(pot, opt) || N * N <= (std::size_t{1} << 22));
    std::map<long long, KernelMatrix> kernels;
    SuperWaveFunction v = u;
    for (std::size_t k = 1; k < subdivision.size(); ++k) {
        const double a = subdivision[k - 1], b = subdivision[k];
        if (!cache) {
            v = apply_parametrix(a, b, v, pot, hp, opt);
        } else {
            const long long key = std::llround((b - a) * 1e12);
            auto it = kernels.find(key);
            if (it == kernels.end()) it = kernels.emplace(key, build_kernel(0.0, b - a, u.grid, pot, hp, opt)).first;
            v = apply_kernel(it->second, v, opt);
        }
        if (observe) observe(k, b, v);
    }
    return v;
}

} // namespace superweyl
