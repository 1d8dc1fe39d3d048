#include "superweyl/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace superweyl {

Grid3D::Grid3D(int n_, double L_) : n(n_), L(L_) {
    if (n < 2 || n % 2) throw std::invalid_argument("grid: n must be even and at least 2");
    if (!(L > 0.0)) throw std::invalid_argument("grid: L must be positive");
}

Vec3 Grid3D::node(std::size_t flat) const {
    const auto nn = static_cast<std::size_t>(n);
    const int iz = static_cast<int>(flat % nn);
    const int iy = static_cast<int>((flat / nn) % nn);
    const int ix = static_cast<int>(flat / (nn * nn));
    return {coordinate(ix), coordinate(iy), coordinate(iz)};
}

double Grid3D::wavenumber(int i) const { return 2.0 * std::numbers::pi * frequency(i) / L; }

Vec3 Grid3D::momentum(std::size_t flat, double hbar) const {
    const auto nn = static_cast<std::size_t>(n);
    const int iz = static_cast<int>(flat % nn);
    const int iy = static_cast<int>((flat / nn) % nn);
    const int ix = static_cast<int>(flat / (nn * nn));
    return {hbar * wavenumber(ix), hbar * wavenumber(iy), hbar * wavenumber(iz)};
}

double Grid3D::momentum_cell(double hbar) const {
    const double d = 2.0 * std::numbers::pi * hbar / L;
    return d * d * d;
}

double l2_norm(const Grid3D& g, const Field& u) {
    double acc = 0.0;
    for (const auto& z : u) acc += std::norm(z);
    return std::sqrt(acc * g.cell_volume());
}

double l2_norm(const Grid3D& g, const Field& u0, const Field& u1) {
    double acc = 0.0;
    for (const auto& z : u0) acc += std::norm(z);
    for (const auto& z : u1) acc += std::norm(z);
    return std::sqrt(acc * g.cell_volume());
}

cplx pairwise_sum(const cplx* v, std::size_t n) {
    if (n <= 8) {
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct SpectralTransform::Plans {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::mutex run_mutex;
};

SpectralTransform::SpectralTransform(const Grid3D& g, double hbar)
    : grid_(g), hbar_(hbar), parity_(g.size()), plans_(std::make_unique<Plans>()) {
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
                const int m = g.frequency(ix) + g.frequency(iy) + g.frequency(iz);
                parity_[g.index(ix, iy, iz)] = (m % 2 == 0) ? 1.0 : -1.0;
            }
    std::lock_guard<std::mutex> lock(planner_mutex());
    plans_->buf = fftw_alloc_complex(g.size());
    plans_->fwd = fftw_plan_dft_3d(n, n, n, plans_->buf, plans_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_3d(n, n, n, plans_->buf, plans_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plans_->fwd);
    fftw_destroy_plan(plans_->bwd);
    fftw_free(plans_->buf);
}

void SpectralTransform::run(const Field& in, Field& out, bool forward) const {
    if (in.size() != grid_.size()) throw std::invalid_argument("spectral transform: field size mismatch");
    std::lock_guard<std::mutex> lock(plans_->run_mutex);
    auto* buf = reinterpret_cast<cplx*>(plans_->buf);
    const double two_pi_hbar = 2.0 * std::numbers::pi * hbar_;
    const double norm = forward ? grid_.cell_volume() / std::pow(two_pi_hbar, 1.5)
                                : grid_.momentum_cell(hbar_) / std::pow(two_pi_hbar, 1.5);
    const std::size_t N = grid_.size();
    if (forward) {
        std::memcpy(static_cast<void*>(buf), in.data(), N * sizeof(cplx));
        fftw_execute(plans_->fwd);
        out.resize(N);
        for (std::size_t i = 0; i < N; ++i) out[i] = buf[i] * (norm * parity_[i]);
    } else {
        for (std::size_t i = 0; i < N; ++i) buf[i] = in[i] * parity_[i];
        fftw_execute(plans_->bwd);
        out.resize(N);
        for (std::size_t i = 0; i < N; ++i) out[i] = buf[i] * norm;
    }
}

Field SpectralTransform::forward(const Field& u) const {
    Field out;
    run(u, out, true);
    return out;
}

Field SpectralTransform::inverse(const Field& uhat) const {
    Field out;
    run(uhat, out, false);
    return out;
}

Field SpectralTransform::momentum_derivative(const Field& u, int j) const {
    Field uh = forward(u);
    for (std::size_t i = 0; i < uh.size(); ++i) uh[i] *= grid_.momentum(i, hbar_)[static_cast<std::size_t>(j)];
    return inverse(uh);
}

const char* fft_backend_version() { return fftw_version; }

Field gaussian_packet(const Grid3D& g, const Vec3& center, double width, const Vec3& momentum, double hbar) {
    Field u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Vec3 x = g.node(i);
        double r2 = 0.0, phase = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            r2 += (x[k] - center[k]) * (x[k] - center[k]);
            phase += momentum[k] * x[k];
        }
        u[i] = std::exp(-0.5 * r2 / (width * width)) * std::polar(1.0, phase / hbar);
    }
    return u;
}

} // namespace superweyl
