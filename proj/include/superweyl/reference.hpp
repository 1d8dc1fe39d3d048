#pragma once

// Two-component spinor side: the Weyl operator, the exact free evolution, a
// Strang split-step solver and the identification with even superfunctions.

#include <functional>
#include <memory>

#include "superweyl/propagator.hpp"

namespace superweyl {

struct SpinorField {
    Grid3D grid;
    Field psi1, psi2;

    SpinorField() = default;
    explicit SpinorField(const Grid3D& g) : grid(g), psi1(g.size()), psi2(g.size()) {}
    SpinorField(const Grid3D& g, Field a, Field b) : grid(g), psi1(std::move(a)), psi2(std::move(b)) {}
};

double norm(const SpinorField& psi);
SpinorField operator-(const SpinorField& a, const SpinorField& b);

// (psi1, psi2) <-> u0 + u1 theta1 theta2 with (u0, u1) = (psi1, psi2)
SuperWaveFunction sharp(const SpinorField& psi);
SpinorField flat(const SuperWaveFunction& u);

// Pauli matrix sigma_j (j = 1, 2, 3) applied pointwise.
SpinorField apply_pauli(int j, const SpinorField& psi);

// Multiplier cos(g) - i sin(g) sigma.xi/|xi|, g = c (t-s) |xi| / hbar; identity at xi = 0.
SpinorField exact_free_propagator(double s, double t, const SpinorField& psi, const HamiltonianParams& hp,
                                  int threads = 0);

// Strang splitting: potential half step, exact free step, potential half step.
SpinorField split_step_reference(double s, double t, const SpinorField& psi, const EMPotential& pot,
                                 const HamiltonianParams& hp, double dt, int threads = 0);

// sum_k c sigma_k (-i hbar d_k - (eps/c) A_k) psi + eps A0 psi, spectral derivatives
SpinorField weyl_rhs(double t, const SpinorField& psi, const EMPotential& pot, const HamiltonianParams& hp);

// Potential given by arbitrary component functions (time-independent); derivatives
// are not available, so it can drive the spinor solvers but not the coefficient equations.
class FunctionPotential final : public EMPotential {
public:
    using Fn = std::function<std::array<double, 4>(const Vec3&)>;
    explicit FunctionPotential(Fn f) : f_(std::move(f)) {}
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;

private:
    Fn f_;
};

// Matrix-valued potential sum_k A^[k] sigma_k (sigma_0 = identity) reduced to the
// scalar/vector form. blocks[j][k] is the component function A_j^[k].
using ComponentFunction = std::function<cplx(const Vec3&)>;
using MatrixPotentialBlocks = std::array<std::array<ComponentFunction, 4>, 4>;

struct ReducedPotential {
    // tilde A_0..3 as functions of q (complex in general)
    std::array<ComponentFunction, 4> components;
    bool valid = false;
    // real parts packaged as a potential (usable when valid)
    std::shared_ptr<EMPotential> potential;
};

// Validity is probed on the given sample points: tilde A_0 must be real there.
ReducedPotential matrix_potential_reduce(const MatrixPotentialBlocks& blocks, const std::vector<Vec3>& samples,
                                         double tol = 1e-12);

} // namespace superweyl
