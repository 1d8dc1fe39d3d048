#include "superweyl/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace superweyl {

LocalJet ComponentJet::local(int k) const {
    LocalJet j;
    if (k < 0) {
        j.value = value;
        j.grad = d1;
        j.hess = d2;
    } else {
        const auto kk = static_cast<std::size_t>(k);
        j.value = d1[kk];
        j.grad = d2[kk];
        j.hess = d3[kk];
    }
    return j;
}

void ConstantScalarPotential::evaluate(double, const Vec3&, int, PotentialJet& out) const {
    out = PotentialJet{};
    out[0].value = a_;
}

void LinearScalarPotential::evaluate(double, const Vec3& q, int order, PotentialJet& out) const {
    out = PotentialJet{};
    out[0].value = e_[0] * q[0] + e_[1] * q[1] + e_[2] * q[2];
    if (order >= 1) out[0].d1 = e_;
}

void UniformMagneticPotential::evaluate(double, const Vec3& q, int order, PotentialJet& out) const {
    out = PotentialJet{};
    out[1].value = -0.5 * b_ * q[1];
    out[2].value = 0.5 * b_ * q[0];
    if (order >= 1) {
        out[1].d1[1] = -0.5 * b_;
        out[2].d1[0] = 0.5 * b_;
    }
}

GaussianBumpPotential::GaussianBumpPotential(std::vector<GaussianBump> bumps) : bumps_(std::move(bumps)) {
    for (const auto& b : bumps_) {
        if (b.component < 0 || b.component > 3)
            throw std::invalid_argument("gaussian bump: component must be in 0..3");
        if (!(b.width > 0.0)) throw std::invalid_argument("gaussian bump: width must be positive");
    }
}

void GaussianBumpPotential::evaluate(double, const Vec3& q, int order, PotentialJet& out) const {
    out = PotentialJet{};
    for (const auto& b : bumps_) {
        Vec3 r;
        double r2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            r[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i)] - b.center[static_cast<std::size_t>(i)];
            r2 += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        }
        const double iw2 = 1.0 / (b.width * b.width);
        const double g = b.amplitude * std::exp(-0.5 * r2 * iw2);
        auto& c = out[static_cast<std::size_t>(b.component)];
        c.value += g;
        if (order < 1) continue;
        for (std::size_t i = 0; i < 3; ++i) c.d1[i] -= r[i] * iw2 * g;
        if (order < 2) continue;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                c.d2[i][j] += (r[i] * r[j] * iw2 * iw2 - (i == j ? iw2 : 0.0)) * g;
        if (order < 3) continue;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k) {
                    double d = -r[i] * r[j] * r[k] * iw2 * iw2 * iw2;
                    d += ((i == j ? r[k] : 0.0) + (i == k ? r[j] : 0.0) + (j == k ? r[i] : 0.0)) * iw2 * iw2;
                    c.d3[i][j][k] += d * g;
                }
    }
}

void SumPotential::evaluate(double t, const Vec3& q, int order, PotentialJet& out) const {
    out = PotentialJet{};
    PotentialJet part{};
    for (const auto& p : parts_) {
        p->evaluate(t, q, order, part);
        for (std::size_t mu = 0; mu < 4; ++mu) {
            auto& o = out[mu];
            const auto& s = part[mu];
            o.value += s.value;
            for (std::size_t i = 0; i < 3; ++i) {
                o.d1[i] += s.d1[i];
                for (std::size_t j = 0; j < 3; ++j) {
                    o.d2[i][j] += s.d2[i][j];
                    for (std::size_t k = 0; k < 3; ++k) o.d3[i][j][k] += s.d3[i][j][k];
                }
            }
        }
    }
}

bool SumPotential::time_independent() const {
    for (const auto& p : parts_)
        if (!p->time_independent()) return false;
    return true;
}

bool SumPotential::is_zero() const {
    for (const auto& p : parts_)
        if (!p->is_zero()) return false;
    return true;
}

bool SumPotential::satisfies_growth_bounds() const {
    for (const auto& p : parts_)
        if (!p->satisfies_growth_bounds()) return false;
    return true;
}

} // namespace superweyl
