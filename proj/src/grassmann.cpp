#include "superweyl/grassmann.hpp"

#include "superweyl/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace superweyl {

namespace {

struct SignTable {
    std::array<std::array<signed char, kSlots>, kSlots> s{};
    // Non-overlapping monomial pairs, enough to make the product a flat loop.
    struct Term {
        unsigned char a, b, ab;
        signed char sign;
    };
    std::array<Term, 81> terms{};

    SignTable() {
        int t = 0;
        for (unsigned a = 0; a < kSlots; ++a) {
            for (unsigned b = 0; b < kSlots; ++b) {
                if (a & b) {
                    s[a][b] = 0;
                    continue;
                }
                int swaps = 0;
                for (int i = 0; i < kGenerators; ++i)
                    if (a & (1u << i)) swaps += std::popcount(b & ((1u << i) - 1u));
                s[a][b] = (swaps % 2) ? -1 : 1;
                terms[static_cast<std::size_t>(t++)] = {static_cast<unsigned char>(a),
                                                        static_cast<unsigned char>(b),
                                                        static_cast<unsigned char>(a | b), s[a][b]};
            }
        }
    }
};

const SignTable& signs() {
    static const SignTable table;
    return table;
}

// sum_{k=0}^{4} coeff[k] m^k; every soul satisfies m^5 = 0.
GrassmannNumber soul_series(const GrassmannNumber& m, const std::array<double, 5>& coeff) {
    GrassmannNumber acc(coeff[4]);
    for (int k = 3; k >= 0; --k) {
        acc = acc * m;
        acc[0] += coeff[static_cast<std::size_t>(k)];
    }
    return acc;
}

} // namespace

int monomial_sign(unsigned a, unsigned b) { return signs().s[a][b]; }

GrassmannNumber GrassmannNumber::generator(int k, cplx coeff) {
    GrassmannNumber g;
    g[1u << k] = coeff;
    return g;
}

GrassmannNumber GrassmannNumber::product_of(std::initializer_list<int> gens, cplx coeff) {
    GrassmannNumber r(coeff);
    for (int k : gens) r = r * generator(k);
    return r;
}

GrassmannNumber GrassmannNumber::soul() const {
    GrassmannNumber s = *this;
    s[0] = 0.0;
    return s;
}

bool GrassmannNumber::is_even(double tol) const {
    for (unsigned m = 0; m < kSlots; ++m)
        if ((std::popcount(m) & 1) && std::abs(c_[m]) > tol) return false;
    return true;
}

bool GrassmannNumber::is_odd(double tol) const {
    for (unsigned m = 0; m < kSlots; ++m)
        if (!(std::popcount(m) & 1) && std::abs(c_[m]) > tol) return false;
    return true;
}

GrassmannNumber GrassmannNumber::even_part() const {
    GrassmannNumber r = *this;
    for (unsigned m = 0; m < kSlots; ++m)
        if (std::popcount(m) & 1) r[m] = 0.0;
    return r;
}

GrassmannNumber GrassmannNumber::odd_part() const { return *this - even_part(); }

double GrassmannNumber::max_abs() const {
    double r = 0.0;
    for (const auto& z : c_) r = std::max(r, std::abs(z));
    return r;
}

GrassmannNumber& GrassmannNumber::operator+=(const GrassmannNumber& o) {
    for (int i = 0; i < kSlots; ++i) c_[i] += o.c_[i];
    return *this;
}

GrassmannNumber& GrassmannNumber::operator-=(const GrassmannNumber& o) {
    for (int i = 0; i < kSlots; ++i) c_[i] -= o.c_[i];
    return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(cplx s) {
    for (auto& z : c_) z *= s;
    return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(const GrassmannNumber& o) {
    *this = *this * o;
    return *this;
}

GrassmannNumber operator+(GrassmannNumber a, const GrassmannNumber& b) { return a += b; }
GrassmannNumber operator-(GrassmannNumber a, const GrassmannNumber& b) { return a -= b; }
GrassmannNumber operator-(GrassmannNumber a) { return a *= cplx{-1.0}; }
GrassmannNumber operator*(GrassmannNumber a, cplx s) { return a *= s; }
GrassmannNumber operator*(cplx s, GrassmannNumber a) { return a *= s; }
GrassmannNumber operator*(GrassmannNumber a, double s) { return a *= cplx{s}; }
GrassmannNumber operator*(double s, GrassmannNumber a) { return a *= cplx{s}; }

GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b) {
    GrassmannNumber r;
    for (const auto& t : signs().terms) {
        const cplx p = a[t.a] * b[t.b];
        if (t.sign > 0)
            r[t.ab] += p;
        else
            r[t.ab] -= p;
    }
    return r;
}

double distance(const GrassmannNumber& a, const GrassmannNumber& b) { return (a - b).max_abs(); }

GrassmannNumber even_inverse(const GrassmannNumber& x) {
    const cplx b = x.body();
    if (b == cplx{}) throw ZeroBody("even_inverse: element has zero body");
    return soul_series(x.soul() * (1.0 / b), {1.0, -1.0, 1.0, -1.0, 1.0}) * (1.0 / b);
}

GrassmannNumber even_sqrt(const GrassmannNumber& x) {
    const cplx b = x.body();
    if (b.imag() == 0.0 && b.real() <= 0.0)
        throw BranchCut("even_sqrt: body lies on the branch cut (-inf, 0]");
    return soul_series(x.soul() * (1.0 / b), {1.0, 0.5, -0.125, 0.0625, -0.0390625}) * std::sqrt(b);
}

GrassmannNumber even_exp(const GrassmannNumber& x) {
    return soul_series(x.soul(), {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0}) * std::exp(x.body());
}

GrassmannNumber odd_derivative(const GrassmannNumber& x, int k) {
    GrassmannNumber r;
    const unsigned bit = 1u << k;
    const unsigned below = bit - 1u;
    for (unsigned m = 0; m < kSlots; ++m) {
        if (!(m & bit)) continue;
        const bool flip = std::popcount(m & below) & 1;
        r[m & ~bit] = flip ? -x[m] : x[m];
    }
    return r;
}

GrassmannNumber berezin_integral(const GrassmannNumber& x, std::span<const int> over) {
    GrassmannNumber r = x;
    for (int k : over) r = odd_derivative(r, k);
    return r;
}

GrassmannNumber berezin_integral(const GrassmannNumber& x, std::initializer_list<int> over) {
    return berezin_integral(x, std::span<const int>(over.begin(), over.size()));
}

namespace {

// exp(sign * i/hbar * (theta1 pi1 + theta2 pi2))
GrassmannNumber odd_plane_wave(double sign, double hbar) {
    const GrassmannNumber pairing = GrassmannNumber::product_of({Theta1, Pi1}) + GrassmannNumber::product_of({Theta2, Pi2});
    return even_exp(pairing * cplx{0.0, sign / hbar});
}

} // namespace

GrassmannNumber super_fourier_odd(const GrassmannNumber& v, double hbar) {
    return berezin_integral(odd_plane_wave(-1.0, hbar) * v, {Theta1, Theta2}) * hbar;
}

GrassmannNumber super_fourier_odd_inverse(const GrassmannNumber& w, double hbar) {
    return berezin_integral(odd_plane_wave(+1.0, hbar) * w, {Pi1, Pi2}) * hbar;
}

namespace {
constexpr unsigned kTheta12 = (1u << Theta1) | (1u << Theta2);
constexpr unsigned kPi12 = (1u << Pi1) | (1u << Pi2);
} // namespace

std::pair<cplx, cplx> super_fourier_odd(cplx v0, cplx v1, double hbar) {
    GrassmannNumber v(v0);
    v[kTheta12] = v1;
    const GrassmannNumber w = super_fourier_odd(v, hbar);
    return {w[0], w[kPi12]};
}

std::pair<cplx, cplx> super_fourier_odd_inverse(cplx w0, cplx w1, double hbar) {
    GrassmannNumber w(w0);
    w[kPi12] = w1;
    const GrassmannNumber v = super_fourier_odd_inverse(w, hbar);
    return {v[0], v[kTheta12]};
}

Matrix2c odd_left_quantization(const GrassmannNumber& symbol, double hbar) {
    Matrix2c m{};
    const GrassmannNumber wave = odd_plane_wave(+1.0, hbar);
    for (int col = 0; col < 2; ++col) {
        GrassmannNumber v;
        v[col == 0 ? 0u : kTheta12] = 1.0;
        const GrassmannNumber fv = super_fourier_odd(v, hbar);
        const GrassmannNumber out = berezin_integral(wave * symbol * fv, {Pi1, Pi2}) * hbar;
        m[0][static_cast<std::size_t>(col)] = out[0];
        m[1][static_cast<std::size_t>(col)] = out[kTheta12];
    }
    return m;
}

GrassmannNumber pauli_differential(int j, const GrassmannNumber& v) {
    const GrassmannNumber t12 = GrassmannNumber::product_of({Theta1, Theta2});
    const GrassmannNumber d12 = odd_derivative(odd_derivative(v, Theta2), Theta1);
    switch (j) {
    case 1:
        return t12 * v - d12;
    case 2:
        return (t12 * v + d12) * cplx{0.0, 1.0};
    case 3:
        return v - GrassmannNumber::generator(Theta1) * odd_derivative(v, Theta1) -
               GrassmannNumber::generator(Theta2) * odd_derivative(v, Theta2);
    default:
        throw std::invalid_argument("pauli_differential: j must be 1, 2 or 3");
    }
}

SuperMatrix::SuperMatrix(int m, int n) : m_(m), n_(n), e_(static_cast<std::size_t>((m + n) * (m + n))) {}

SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
    if (a.even_dim() != b.even_dim() || a.odd_dim() != b.odd_dim())
        throw std::invalid_argument("supermatrix product: block shapes differ");
    SuperMatrix r(a.even_dim(), a.odd_dim());
    const int n = a.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            GrassmannNumber acc;
            for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

GrassmannNumber even_determinant(const std::vector<GrassmannNumber>& m, int dim) {
    if (dim == 0) return GrassmannNumber(1.0);
    if (dim == 1) return m[0];
    if (dim == 2) return m[0] * m[3] - m[1] * m[2];
    GrassmannNumber det;
    std::vector<GrassmannNumber> minor(static_cast<std::size_t>((dim - 1) * (dim - 1)));
    for (int c = 0; c < dim; ++c) {
        int idx = 0;
        for (int r = 1; r < dim; ++r)
            for (int k = 0; k < dim; ++k)
                if (k != c) minor[static_cast<std::size_t>(idx++)] = m[static_cast<std::size_t>(r * dim + k)];
        const GrassmannNumber term = m[static_cast<std::size_t>(c)] * even_determinant(minor, dim - 1);
        if (c % 2)
            det -= term;
        else
            det += term;
    }
    return det;
}

namespace {

std::vector<GrassmannNumber> even_matrix_inverse(const std::vector<GrassmannNumber>& d, int n,
                                                 const GrassmannNumber& det_inv) {
    std::vector<GrassmannNumber> inv(static_cast<std::size_t>(n * n));
    if (n == 1) {
        inv[0] = det_inv;
        return inv;
    }
    std::vector<GrassmannNumber> minor(static_cast<std::size_t>((n - 1) * (n - 1)));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            int idx = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != r && j != c) minor[static_cast<std::size_t>(idx++)] = d[static_cast<std::size_t>(i * n + j)];
            GrassmannNumber cof = even_determinant(minor, n - 1) * det_inv;
            // adjugate: transpose of the cofactor matrix
            inv[static_cast<std::size_t>(c * n + r)] = ((r + c) % 2) ? -cof : cof;
        }
    return inv;
}

} // namespace

GrassmannNumber sdet(const SuperMatrix& sm) {
    const int m = sm.even_dim();
    const int n = sm.odd_dim();
    std::vector<GrassmannNumber> d(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(i * n + j)] = sm(m + i, m + j);
    const GrassmannNumber det_d = even_determinant(d, n);
    if (std::abs(det_d.body()) == 0.0) throw SingularBlock("sdet: odd-odd block is singular");
    const GrassmannNumber det_d_inv = even_inverse(det_d);
    const auto d_inv = even_matrix_inverse(d, n, det_d_inv);

    std::vector<GrassmannNumber> schur(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            GrassmannNumber acc = sm(i, j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    acc -= sm(i, m + k) * d_inv[static_cast<std::size_t>(k * n + l)] * sm(m + l, j);
            schur[static_cast<std::size_t>(i * m + j)] = acc;
        }
    return even_determinant(schur, m) * det_d_inv;
}

GrassmannNumber grassmann_continuation(const LocalJet& jet, const std::array<GrassmannNumber, 3>& x) {
    std::array<GrassmannNumber, 3> s;
    for (int j = 0; j < 3; ++j) s[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)].soul();
    GrassmannNumber f(jet.value);
    for (std::size_t j = 0; j < 3; ++j) {
        f += s[j] * jet.grad[j];
        for (std::size_t k = 0; k < 3; ++k) f += (s[j] * s[k]) * (0.5 * jet.hess[j][k]);
    }
    return f;
}

} // namespace superweyl
