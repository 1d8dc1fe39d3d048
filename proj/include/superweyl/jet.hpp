#pragma once

// Truncated Taylor jets in three real variables with complex values.
// Jet1 carries value and gradient, Jet2 adds the symmetric Hessian.
// Differentiating a jet drops one order: d(Jet2) -> Jet1, d(Jet1) -> complex.

#include <array>
#include <complex>
#include <type_traits>

namespace superweyl {

using cplx = std::complex<double>;

// packed index of the symmetric pair (i, j)
constexpr int sym_index(int i, int j) {
    if (i > j) {
        const int t = i;
        i = j;
        j = t;
    }
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

struct Jet1 {
    cplx v{};
    std::array<cplx, 3> g{};

    Jet1() = default;
    Jet1(cplx value) : v(value) {}
    Jet1(double value) : v(value) {}

    Jet1& operator+=(const Jet1& o) {
        v += o.v;
        for (int i = 0; i < 3; ++i) g[i] += o.g[i];
        return *this;
    }
    Jet1& operator-=(const Jet1& o) {
        v -= o.v;
        for (int i = 0; i < 3; ++i) g[i] -= o.g[i];
        return *this;
    }
    Jet1& operator*=(cplx s) {
        v *= s;
        for (auto& z : g) z *= s;
        return *this;
    }
};

struct Jet2 {
    cplx v{};
    std::array<cplx, 3> g{};
    std::array<cplx, 6> h{};

    Jet2() = default;
    Jet2(cplx value) : v(value) {}
    Jet2(double value) : v(value) {}

    cplx hess(int i, int j) const { return h[static_cast<std::size_t>(sym_index(i, j))]; }

    Jet2& operator+=(const Jet2& o) {
        v += o.v;
        for (int i = 0; i < 3; ++i) g[i] += o.g[i];
        for (int i = 0; i < 6; ++i) h[i] += o.h[i];
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        v -= o.v;
        for (int i = 0; i < 3; ++i) g[i] -= o.g[i];
        for (int i = 0; i < 6; ++i) h[i] -= o.h[i];
        return *this;
    }
    Jet2& operator*=(cplx s) {
        v *= s;
        for (auto& z : g) z *= s;
        for (auto& z : h) z *= s;
        return *this;
    }
};

template <class J>
concept JetType = std::is_same_v<J, Jet1> || std::is_same_v<J, Jet2>;

template <JetType J> J operator+(J a, const J& b) { return a += b; }
template <JetType J> J operator-(J a, const J& b) { return a -= b; }
template <JetType J> J operator-(J a) { return a *= cplx{-1.0}; }
template <JetType J> J operator*(J a, cplx s) { return a *= s; }
template <JetType J> J operator*(cplx s, J a) { return a *= s; }
template <JetType J> J operator*(J a, double s) { return a *= cplx{s}; }
template <JetType J> J operator*(double s, J a) { return a *= cplx{s}; }

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + a.g[i] * b.v;
    return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + a.g[i] * b.v;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const int k = sym_index(i, j);
            r.h[k] = a.v * b.h[k] + a.h[k] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i];
        }
    return r;
}

inline Jet1 exp(const Jet1& a) {
    Jet1 r;
    r.v = std::exp(a.v);
    for (int i = 0; i < 3; ++i) r.g[i] = r.v * a.g[i];
    return r;
}

inline Jet2 exp(const Jet2& a) {
    Jet2 r;
    r.v = std::exp(a.v);
    for (int i = 0; i < 3; ++i) r.g[i] = r.v * a.g[i];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const int k = sym_index(i, j);
            r.h[k] = r.v * (a.h[k] + a.g[i] * a.g[j]);
        }
    return r;
}

// derivative along variable i
inline Jet1 d(const Jet2& a, int i) {
    Jet1 r;
    r.v = a.g[i];
    for (int j = 0; j < 3; ++j) r.g[j] = a.hess(i, j);
    return r;
}

inline cplx d(const Jet1& a, int i) { return a.g[i]; }

// sum_i k_i d(a, i), skipping zero weights
inline Jet1 contract(const Jet2& a, const std::array<cplx, 3>& k) {
    Jet1 r;
    for (int i = 0; i < 3; ++i) {
        if (k[i] == cplx{}) continue;
        r.v += k[i] * a.g[i];
        for (int j = 0; j < 3; ++j) r.g[j] += k[i] * a.hess(i, j);
    }
    return r;
}

inline cplx contract(const Jet1& a, const std::array<cplx, 3>& k) {
    cplx r{};
    for (int i = 0; i < 3; ++i)
        if (k[i] != cplx{}) r += k[i] * a.g[i];
    return r;
}

inline Jet1 lower(const Jet2& a) {
    Jet1 r;
    r.v = a.v;
    r.g = a.g;
    return r;
}

inline cplx lower(const Jet1& a) { return a.v; }

} // namespace superweyl
