#pragma once

// Classical mechanics on superspace for the Weyl Hamiltonian
//   H = sum_j c sigma_j (xi_j - (eps/c) A_j(t, x)) + eps A0(t, x)
// with even coordinates (x, xi) and odd coordinates (theta, pi), all valued in
// the four-generator Grassmann algebra.

#include <array>
#include <vector>

#include "superweyl/grassmann.hpp"
#include "superweyl/potential.hpp"

namespace superweyl {

struct HamiltonianParams {
    double hbar = 1.0;
    double c = 1.0;
    double epsilon = 0.0;
};

using EvenVec = std::array<GrassmannNumber, 3>;
using OddVec = std::array<GrassmannNumber, 2>;

struct PhasePoint {
    EvenVec x;
    EvenVec xi;
    OddVec theta;
    OddVec pi;

    PhasePoint& operator+=(const PhasePoint& o);
    PhasePoint& operator*=(double s);
};

PhasePoint operator+(PhasePoint a, const PhasePoint& b);
PhasePoint operator*(double s, PhasePoint a);

EvenVec even_vec(const Vec3& v);

// sigma_1 = theta1 theta2 + hbar^-2 pi1 pi2
// sigma_2 = i (theta1 theta2 - hbar^-2 pi1 pi2)
// sigma_3 = -i hbar^-1 (theta1 pi1 + theta2 pi2)
EvenVec sigma_symbols(const OddVec& theta, const OddVec& pi, double hbar);

GrassmannNumber hamiltonian(double t, const PhasePoint& p, const EMPotential& pot, const HamiltonianParams& hp);

// Time derivative of every coordinate along the Hamilton flow.
PhasePoint hamilton_rhs(double t, const PhasePoint& p, const EMPotential& pot, const HamiltonianParams& hp);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;

    const PhasePoint& final_state() const { return states.back(); }
};

// Classical RK4 with uniform steps, the step count being ceil(|t - s| / dt).
Trajectory flow_integrate(double s, double t, const PhasePoint& init, const EMPotential& pot,
                          const HamiltonianParams& hp, double dt);

// Largest coefficient change of H along a trajectory (zero for exact
// time-independent flows).
double energy_drift(const Trajectory& traj, const EMPotential& pot, const HamiltonianParams& hp);

// Integral of <dx/dt|xi> + <dtheta/dt|pi> - H along the stored steps (composite Simpson,
// with a 3/8 panel at the end for an odd number of steps).
GrassmannNumber action_integral(const Trajectory& traj, const EMPotential& pot, const HamiltonianParams& hp);

struct FlowInverse {
    EvenVec y;
    OddVec omega;
    Trajectory trajectory; // flow started from (y, xi_under, omega, pi_under)
    int iterations = 0;
    double residual = 0.0;
};

// Solves x(t; y, xi, omega, pi) = x_bar, theta(t; ...) = theta_bar for (y, omega).
// Throws NoConvergence if the residual stays above tol.
FlowInverse invert_flow(double s, double t, const EvenVec& x_bar, const OddVec& theta_bar, const EvenVec& xi_under,
                        const OddVec& pi_under, const EMPotential& pot, const HamiltonianParams& hp, double dt,
                        double tol = 1e-10);

struct OracleResult {
    // Phase and amplitude density as functions of the generators
    // g1 = theta_bar1, g2 = theta_bar2, g3 = pi_under1, g4 = pi_under2.
    GrassmannNumber S;
    GrassmannNumber D;
    EvenVec y;
    OddVec omega;
    double energy_drift = 0.0;
};

// Phase S(t, s; x_bar, theta_bar, xi_under, pi_under) built from the inverse flow and the
// action, and D = sdet of its mixed Hessian. The x_bar derivatives are central differences
// with step fd_step; the odd derivatives are exact.
OracleResult oracle_phase_and_amplitude(double s, double t, const Vec3& x_bar, const Vec3& xi_under,
                                        const EMPotential& pot, const HamiltonianParams& hp, double dt,
                                        double fd_step = 1e-5);

} // namespace superweyl
