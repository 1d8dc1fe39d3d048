#pragma once

// Periodic cubic grid and the matching momentum lattice.
//
// Nodes sit at x_i = (i - n/2) L/n, i = 0..n-1, along each axis, so x = 0 is a node.
// Momenta are xi = hbar * 2 pi m / L with m in FFT order (0..n/2-1, -n/2..-1).
// The spatial transform is normalised as
//   u^(xi) = (2 pi hbar)^(-3/2) sum_x dx^3 e^{-i<x|xi>/hbar} u(x),
//   u(x)   = (2 pi hbar)^(-3/2) sum_xi dxi^3 e^{+i<x|xi>/hbar} u^(xi).

#include <complex>
#include <memory>
#include <vector>

#include "superweyl/potential.hpp"

namespace superweyl {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

struct Grid3D {
    int n = 8;
    double L = 10.0;

    Grid3D() = default;
    Grid3D(int n_, double L_);

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
    double dx() const { return L / n; }
    double cell_volume() const { return dx() * dx() * dx(); }
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
    }
    double coordinate(int i) const { return (i - n / 2) * dx(); }
    Vec3 node(std::size_t flat) const;
    // signed lattice index of FFT slot i
    int frequency(int i) const { return i < n / 2 ? i : i - n; }
    double wavenumber(int i) const;
    Vec3 momentum(std::size_t flat, double hbar) const;
    double momentum_cell(double hbar) const; // dxi^3
};

double l2_norm(const Grid3D& g, const Field& u);
double l2_norm(const Grid3D& g, const Field& u0, const Field& u1);

// Fixed-order pairwise summation (reproducible independent of thread layout).
cplx pairwise_sum(const cplx* v, std::size_t n);

// Physically normalised 3D transforms built on FFTW. Plans are created once per
// instance; apply() may be called concurrently on distinct instances only.
class SpectralTransform {
public:
    SpectralTransform(const Grid3D& g, double hbar);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    Field forward(const Field& u) const;
    Field inverse(const Field& uhat) const;

    // -i hbar d/dx_j computed spectrally
    Field momentum_derivative(const Field& u, int j) const;

    const Grid3D& grid() const { return grid_; }
    double hbar() const { return hbar_; }

private:
    void run(const Field& in, Field& out, bool forward) const;

    Grid3D grid_;
    double hbar_;
    std::vector<double> parity_; // (-1)^(m1+m2+m3)
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

const char* fft_backend_version();

// Gaussian packet exp(-|x-c|^2 / (2 w^2) + i<p|x>/hbar), unnormalised.
Field gaussian_packet(const Grid3D& g, const Vec3& center, double width, const Vec3& momentum, double hbar);

} // namespace superweyl
