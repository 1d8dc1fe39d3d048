#pragma once

// Finite Grassmann algebra over four odd generators.
//
// Generators, in canonical order: g1 = theta1, g2 = theta2, g3 = pi1, g4 = pi2.
// A number is stored as 16 complex coefficients indexed by a bitmask; bit k set
// means generator g(k+1) is present, and monomials are always written with
// their generators in increasing order.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace superweyl {

using cplx = std::complex<double>;

inline constexpr int kGenerators = 4;
inline constexpr int kSlots = 1 << kGenerators;

enum Generator : int { Theta1 = 0, Theta2 = 1, Pi1 = 2, Pi2 = 3 };

class GrassmannNumber {
public:
    GrassmannNumber() { c_.fill(cplx{}); }
    GrassmannNumber(cplx body) : GrassmannNumber() { c_[0] = body; }
    GrassmannNumber(double body) : GrassmannNumber(cplx{body, 0.0}) {}

    static GrassmannNumber generator(int k, cplx coeff = 1.0);
    // Product g_{i1} g_{i2} ... in the given order, reordered with the proper sign.
    static GrassmannNumber product_of(std::initializer_list<int> gens, cplx coeff = 1.0);

    cplx& operator[](unsigned mask) { return c_[mask]; }
    const cplx& operator[](unsigned mask) const { return c_[mask]; }

    cplx body() const { return c_[0]; }
    GrassmannNumber soul() const;

    bool is_even(double tol = 0.0) const;
    bool is_odd(double tol = 0.0) const;
    GrassmannNumber even_part() const;
    GrassmannNumber odd_part() const;
    double max_abs() const;

    GrassmannNumber& operator+=(const GrassmannNumber& o);
    GrassmannNumber& operator-=(const GrassmannNumber& o);
    GrassmannNumber& operator*=(cplx s);
    GrassmannNumber& operator*=(const GrassmannNumber& o);

    const std::array<cplx, kSlots>& coeffs() const { return c_; }

private:
    std::array<cplx, kSlots> c_;
};

GrassmannNumber operator+(GrassmannNumber a, const GrassmannNumber& b);
GrassmannNumber operator-(GrassmannNumber a, const GrassmannNumber& b);
GrassmannNumber operator-(GrassmannNumber a);
GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b);
GrassmannNumber operator*(GrassmannNumber a, cplx s);
GrassmannNumber operator*(cplx s, GrassmannNumber a);
GrassmannNumber operator*(GrassmannNumber a, double s);
GrassmannNumber operator*(double s, GrassmannNumber a);

inline GrassmannNumber gmul(const GrassmannNumber& a, const GrassmannNumber& b) { return a * b; }

// Sign picked up when multiplying monomial a by monomial b (0 if they share a generator).
int monomial_sign(unsigned a, unsigned b);

double distance(const GrassmannNumber& a, const GrassmannNumber& b);

// Inverse of an element with nonzero body. Throws ZeroBody.
GrassmannNumber even_inverse(const GrassmannNumber& x);
// Principal square root of an even element. Throws BranchCut when the body lies on (-inf, 0].
GrassmannNumber even_sqrt(const GrassmannNumber& x);
// Exponential of an even element.
GrassmannNumber even_exp(const GrassmannNumber& x);

// Left derivative with respect to generator k.
GrassmannNumber odd_derivative(const GrassmannNumber& x, int k);
// Berezin integral over the listed generators: d/dg_{last} ... d/dg_{first} applied to x,
// so that the integral of g_{first} ... g_{last} is 1.
GrassmannNumber berezin_integral(const GrassmannNumber& x, std::span<const int> over);
GrassmannNumber berezin_integral(const GrassmannNumber& x, std::initializer_list<int> over);

// Odd Fourier transform taking v0 + v1 theta1 theta2 to w0 + w1 pi1 pi2.
std::pair<cplx, cplx> super_fourier_odd(cplx v0, cplx v1, double hbar);
std::pair<cplx, cplx> super_fourier_odd_inverse(cplx w0, cplx w1, double hbar);

// Same transforms on algebra elements: the input is a function of theta only
// (resp. pi only) and the output a function of pi (resp. theta).
GrassmannNumber super_fourier_odd(const GrassmannNumber& v, double hbar);
GrassmannNumber super_fourier_odd_inverse(const GrassmannNumber& w, double hbar);

using Matrix2c = std::array<std::array<cplx, 2>, 2>;

// Matrix of the left-quantized operator with symbol f(theta, pi) acting on
// even functions v0 + v1 theta1 theta2, in the basis (v0, v1).
Matrix2c odd_left_quantization(const GrassmannNumber& symbol, double hbar);

// Differential-operator form of the odd Pauli operators acting on functions of theta:
//   j=1: theta1 theta2 - d1 d2,  j=2: i (theta1 theta2 + d1 d2),  j=3: 1 - theta1 d1 - theta2 d2.
GrassmannNumber pauli_differential(int j, const GrassmannNumber& v);

// Supermatrix with an m x m even block A, m x n odd block B, n x m odd block C
// and n x n even block D, stored densely in row-major order.
class SuperMatrix {
public:
    SuperMatrix(int m, int n);

    int even_dim() const { return m_; }
    int odd_dim() const { return n_; }
    int size() const { return m_ + n_; }

    GrassmannNumber& operator()(int r, int c) { return e_[static_cast<std::size_t>(r * size() + c)]; }
    const GrassmannNumber& operator()(int r, int c) const {
        return e_[static_cast<std::size_t>(r * size() + c)];
    }

private:
    int m_, n_;
    std::vector<GrassmannNumber> e_;
};

SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b);

// Determinant of a square matrix with pairwise commuting (even) entries.
GrassmannNumber even_determinant(const std::vector<GrassmannNumber>& m, int dim);

// Berezinian det(A - B D^-1 C) / det(D). Throws SingularBlock if det(D) has zero body.
GrassmannNumber sdet(const SuperMatrix& m);

// Value, gradient and Hessian of a real function of three variables at a point.
struct LocalJet {
    double value = 0.0;
    std::array<double, 3> grad{};
    std::array<std::array<double, 3>, 3> hess{};
};

// Grassmann continuation f(x) = f(x_B) + f'(x_B) s + f''(x_B) s s / 2 with s the soul of x.
// Exact because the soul of an even element cubes to zero.
GrassmannNumber grassmann_continuation(const LocalJet& jet, const std::array<GrassmannNumber, 3>& x);

} // namespace superweyl
