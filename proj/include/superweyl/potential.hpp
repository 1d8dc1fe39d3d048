#pragma once

// Electromagnetic potentials A_mu(t, q), mu = 0..3, with derivatives in q up to third order.

#include <array>
#include <memory>
#include <vector>

#include "superweyl/grassmann.hpp"

namespace superweyl {

using Vec3 = std::array<double, 3>;

struct ComponentJet {
    double value = 0.0;
    Vec3 d1{};
    std::array<Vec3, 3> d2{};
    std::array<std::array<Vec3, 3>, 3> d3{};

    // value/gradient/Hessian of this component, or of its derivative along q_k when k >= 0
    LocalJet local(int k = -1) const;
};

using PotentialJet = std::array<ComponentJet, 4>;

class EMPotential {
public:
    virtual ~EMPotential() = default;

    // Fills derivatives up to `order` (0..3); higher orders are left untouched.
    virtual void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const = 0;

    virtual bool time_independent() const { return true; }
    virtual bool is_zero() const { return false; }
    // Smoothness and bound hypotheses required by the parametrix construction.
    virtual bool satisfies_growth_bounds() const { return true; }

    PotentialJet jet(double t, const Vec3& q, int order = 3) const {
        PotentialJet out{};
        evaluate(t, q, order, out);
        return out;
    }
};

class ZeroPotential final : public EMPotential {
public:
    void evaluate(double, const Vec3&, int, PotentialJet& out) const override { out = PotentialJet{}; }
    bool is_zero() const override { return true; }
};

// A0 = a, A = 0
class ConstantScalarPotential final : public EMPotential {
public:
    explicit ConstantScalarPotential(double a) : a_(a) {}
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;
    bool is_zero() const override { return a_ == 0.0; }

private:
    double a_;
};

// A0 = <E|q>, A = 0
class LinearScalarPotential final : public EMPotential {
public:
    explicit LinearScalarPotential(const Vec3& e) : e_(e) {}
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;
    // Linear growth violates the boundedness hypotheses.
    bool satisfies_growth_bounds() const override { return false; }

private:
    Vec3 e_;
};

// Symmetric gauge for a uniform field along q3: A = (-B q2 / 2, B q1 / 2, 0), A0 = 0.
class UniformMagneticPotential final : public EMPotential {
public:
    explicit UniformMagneticPotential(double b) : b_(b) {}
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;
    bool is_zero() const override { return b_ == 0.0; }
    bool satisfies_growth_bounds() const override { return false; }
    double field() const { return b_; }

private:
    double b_;
};

struct GaussianBump {
    int component = 0; // 0 = scalar potential, 1..3 = vector potential
    double amplitude = 0.0;
    Vec3 center{};
    double width = 1.0;
};

// Sum of Gaussian bumps a exp(-|q - c|^2 / (2 w^2)) added to single components.
class GaussianBumpPotential final : public EMPotential {
public:
    explicit GaussianBumpPotential(std::vector<GaussianBump> bumps);
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;
    bool is_zero() const override { return bumps_.empty(); }
    const std::vector<GaussianBump>& bumps() const { return bumps_; }

private:
    std::vector<GaussianBump> bumps_;
};

// Component-wise sum of several potentials.
class SumPotential final : public EMPotential {
public:
    explicit SumPotential(std::vector<std::shared_ptr<const EMPotential>> parts) : parts_(std::move(parts)) {}
    void evaluate(double t, const Vec3& q, int order, PotentialJet& out) const override;
    bool time_independent() const override;
    bool is_zero() const override;
    bool satisfies_growth_bounds() const override;

private:
    std::vector<std::shared_ptr<const EMPotential>> parts_;
};

} // namespace superweyl
