#pragma once

// Short-time parametrix U(t,s) acting on even superfunctions u0 + u1 theta1 theta2,
// the quantized Hamiltonian, time slicing and defect diagnostics.

#include <functional>
#include <vector>

#include "superweyl/grid.hpp"
#include "superweyl/hjcoeffs.hpp"

namespace superweyl {

struct SuperWaveFunction {
    Grid3D grid;
    Field u0, u1;

    SuperWaveFunction() = default;
    explicit SuperWaveFunction(const Grid3D& g) : grid(g), u0(g.size()), u1(g.size()) {}
    SuperWaveFunction(const Grid3D& g, Field a, Field b);

    SuperWaveFunction& operator+=(const SuperWaveFunction& o);
    SuperWaveFunction& operator-=(const SuperWaveFunction& o);
    SuperWaveFunction& operator*=(cplx s);
};

SuperWaveFunction operator+(SuperWaveFunction a, const SuperWaveFunction& b);
SuperWaveFunction operator-(SuperWaveFunction a, const SuperWaveFunction& b);
SuperWaveFunction operator*(cplx s, SuperWaveFunction a);

// sqrt(|u0|^2 + |u1|^2) in L2 of the grid
double norm(const SuperWaveFunction& u);

// Full super Fourier transform. On every momentum node the odd part is mapped
// by the odd transform, so w0 = hbar * u1^ and w1 = u0^ / hbar, where
// u^ is the spatial transform (see grid.hpp for its normalisation).
struct SuperSpectrum {
    Grid3D grid;
    Field w0, w1; // body and pi1 pi2 coefficients
};

SuperSpectrum super_fft(const SuperWaveFunction& u, double hbar);
SuperWaveFunction super_ifft(const SuperSpectrum& w, double hbar);

struct PropagatorOptions {
    double dt_coeff = 5e-3;          // RK4 step for the coefficient equations
    double blowup_threshold = 1e6;
    double max_rate_step = 0.1;      // substep trigger, see CoefficientOptions
    int threads = 0;                 // 0: hardware concurrency
    bool force_quadrature = false;   // disable the Fourier-multiplier path for zero potentials
};

// Kernel entry on one (x, xi) node pair. b[b][a] maps component a of the input
// to component b of the output; phase holds exp(i S_B / hbar).
struct KernelEntry {
    cplx b00, b01, b10, b11;
    cplx phase;
};

struct KernelMatrix {
    Grid3D grid;
    double s = 0.0, t = 0.0, hbar = 1.0;
    // true when the entries do not depend on x; then only n^3 entries (indexed by xi) are stored
    // and the phase is exp(i <x|xi> / hbar)
    bool multiplier = false;
    std::vector<KernelEntry> entries; // [x * n^3 + xi], or [xi] for a multiplier

    const KernelEntry& at(std::size_t x, std::size_t xi) const {
        return multiplier ? entries[xi] : entries[x * grid.size() + xi];
    }
};

// The 2x2 matrix B and phase from the coefficients at one node pair.
KernelEntry kernel_entry(const CoefficientSet& cs, double hbar);

KernelMatrix build_kernel(double s, double t, const Grid3D& grid, const EMPotential& pot,
                          const HamiltonianParams& hp, const PropagatorOptions& opt = {});

// Kernels for several end times sharing one integration from s (times ordered away from s).
std::vector<KernelMatrix> build_kernels(double s, const std::vector<double>& times, const Grid3D& grid,
                                        const EMPotential& pot, const HamiltonianParams& hp,
                                        const PropagatorOptions& opt = {});

SuperWaveFunction apply_kernel(const KernelMatrix& k, const SuperWaveFunction& u, const PropagatorOptions& opt = {});

SuperWaveFunction apply_parametrix(double s, double t, const SuperWaveFunction& u, const EMPotential& pot,
                                   const HamiltonianParams& hp, const PropagatorOptions& opt = {});

// U(t_k, s)u for every t_k without storing the kernels.
std::vector<SuperWaveFunction> apply_parametrix(double s, const std::vector<double>& times,
                                                const SuperWaveFunction& u, const EMPotential& pot,
                                                const HamiltonianParams& hp, const PropagatorOptions& opt = {});

// Weyl-quantized Hamiltonian: sum_k c M_k (-i hbar d_k - (eps/c) A_k) + eps A0 with
// M_k the matrix of the odd Pauli operator (plus the identity for k = 3).
SuperWaveFunction apply_hamiltonian(double t, const SuperWaveFunction& u, const EMPotential& pot,
                                    const HamiltonianParams& hp);

// || i hbar (U(t+dtau,s)u - U(t-dtau,s)u) / (2 dtau) - H(t) U(t,s)u ||
double defect_norm(double s, double t, const SuperWaveFunction& u, const EMPotential& pot,
                   const HamiltonianParams& hp, double dtau = 1e-4, const PropagatorOptions& opt = {});

// Same for several t at once (one coefficient sweep).
std::vector<double> defect_norms(double s, const std::vector<double>& ts, const SuperWaveFunction& u,
                                 const EMPotential& pot, const HamiltonianParams& hp, double dtau = 1e-4,
                                 const PropagatorOptions& opt = {});

// Called after slice k (1-based) with its end time and the current state.
using SliceObserver = std::function<void(std::size_t, double, const SuperWaveFunction&)>;

// U(t_N, t_{N-1}) ... U(t_1, t_0) u for the subdivision t_0 = s < ... < t_N = t.
// For time-independent potentials kernels of equal duration are built once.
SuperWaveFunction trotter_compose(const std::vector<double>& subdivision, const SuperWaveFunction& u,
                                  const EMPotential& pot, const HamiltonianParams& hp,
                                  const PropagatorOptions& opt = {}, const SliceObserver& observe = {});

std::vector<double> uniform_subdivision(double s, double t, int slices);

} // namespace superweyl
