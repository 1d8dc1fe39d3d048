#pragma once

// Coefficient form of the phase and amplitude of the short-time parametrix.
//
// With generators theta1, theta2 (position side) and pi1, pi2 (momentum side)
//   S = s00 + s10 th1 th2 + s01 pi1 pi2 + sc1d1 th1 pi1 + sc1d2 th1 pi2
//           + sc2d1 th2 pi1 + sc2d2 th2 pi2 + s11 th1 th2 pi1 pi2
// and likewise for the amplitude A with coefficients a.. . Every coefficient is a
// function of (t, s; x, xi) obtained from scalar ODEs in t at fixed (x, xi).
// x-derivatives needed along the way are carried as truncated Taylor jets.

#include <array>
#include <vector>

#include "superweyl/grassmann.hpp"
#include "superweyl/jet.hpp"
#include "superweyl/potential.hpp"
#include "superweyl/superflow.hpp"

namespace superweyl {

struct SCoefficients {
    cplx s00, s10, s01, sc1d1, sc2d2, sc1d2, sc2d1, s11;
};

struct ACoefficients {
    cplx a00, a10, a01, ac1d1, ac2d2, ac1d2, ac2d1, a11;
};

struct WTerms {
    cplx w0, w1, w2, w3, w4;
};

// x-gradients of the coefficients (the a11 gradient is not tracked).
struct SensitivityState {
    using Grad = std::array<cplx, 3>;
    Grad s00{}, s10{}, s01{}, sc1d1{}, sc2d2{}, s11{};
    Grad a00{}, a10{}, a01{}, ac1d1{}, ac2d2{};
};

// Second derivatives of the Hamiltonian in the odd variables, evaluated at
// theta = pi = 0 with the spatial momentum replaced by the gradient of s00.
struct HTildeDerivatives {
    cplx pi1theta1, pi2theta2, pi2pi1, theta2theta1;
    // derivatives of the above with respect to xi_j (constants)
    std::array<cplx, 3> pi1theta1_xi, pi2theta2_xi, pi2pi1_xi, theta2theta1_xi;
};

struct CoefficientOptions {
    double dt = 1e-3;
    double blowup_threshold = 1e6;
    // A step is split into substeps when h * 2|w0| exceeds this; 2|w0| is the
    // local rate of the Riccati equation, which grows near a focal point.
    double max_rate_step = 0.02;
};

struct CoefficientSet {
    double t = 0.0;
    SCoefficients S{};
    ACoefficients A{};
    SensitivityState sens{};
    WTerms w{};
};

HTildeDerivatives htilde_derivatives(double t, double s, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                                     const HamiltonianParams& hp, double dt = 1e-3);

// Integrates all coefficient equations from s and reports them at each entry of
// `times`; the entries must be ordered moving away from s. Throws RiccatiBlowup.
std::vector<CoefficientSet> solve_coefficients(double s, const std::vector<double>& times, const Vec3& x,
                                               const Vec3& xi, const EMPotential& pot, const HamiltonianParams& hp,
                                               const CoefficientOptions& opt = {});

CoefficientSet solve_coefficients(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                                  const HamiltonianParams& hp, const CoefficientOptions& opt = {});

SCoefficients integrate_S(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt = 1e-3);
ACoefficients integrate_A(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt = 1e-3);
SensitivityState sensitivities(double s, double t, const Vec3& x, const Vec3& xi, const EMPotential& pot,
                               const HamiltonianParams& hp, double dt = 1e-3);

struct FreeCoefficients {
    SCoefficients S;
    ACoefficients A;
};

// Exact coefficients for vanishing potentials. Throws ZeroMomentum for xi = 0.
FreeCoefficients closed_form_free(double s, double t, const Vec3& x, const Vec3& xi, const HamiltonianParams& hp);

// Coefficients assembled into algebra elements over g1 = theta1, g2 = theta2, g3 = pi1, g4 = pi2.
GrassmannNumber phase_element(const SCoefficients& S);
GrassmannNumber amplitude_element(const ACoefficients& A);

} // namespace superweyl
