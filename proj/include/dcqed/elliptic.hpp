#pragma once

#include <complex>
#include <functional>

namespace dcqed {

using Complex = std::complex<double>;

// Principal square root with arg in (-pi, pi]; a signed-zero imaginary part is
// treated as +0 so the negative real axis maps to the positive imaginary axis.
Complex psqrt(Complex z);

namespace elliptic {

struct ContourSegment {
    Complex start;
    Complex end;
    double tolerance = 1e-12;
};

struct QuadResult {
    Complex value;
    double error = 0.0;
    int panels = 0;
};

constexpr int kPanelBudget = 4096;

// Straight-line path integral of f from segment.start to segment.end.
// Gauss-Kronrod 7/15 panels, adaptive bisection, endpoint singularities allowed.
QuadResult contour_quadrature(const std::function<Complex(Complex)>& f,
                              const ContourSegment& segment);

Complex carlson_rf(Complex x, Complex y, Complex z);
Complex carlson_rd(Complex x, Complex y, Complex z);

// Complete integrals with complex modulus k (not k^2).
Complex ellip_complete_k(Complex k);
Complex ellip_complete_e(Complex k);

// Legendre-form incomplete integrals on the straight path 0 -> z:
//   F = int dx / (sqrt(1-x^2) sqrt(1-k^2 x^2)),  E = int dx sqrt(1-k^2 x^2) / sqrt(1-x^2).
Complex legendre_f(Complex z, Complex k);
Complex legendre_e(Complex z, Complex k);

// Integrands of the incomplete integrals in the resonator-conductivity convention.
// The first kind uses sqrt(x^2-1) sqrt(k^2 x^2-1); the second kind is the Legendre
// integrand. Principal branches throughout.
Complex first_kind_integrand(Complex x, Complex k);
Complex second_kind_integrand(Complex x, Complex k);

// K(z;k) = int_0^z first_kind_integrand. Relates to legendre_f by the constant factor
// -s1*s2, with s1 = sign of Im(z^2) and s2 = sign of Im(k^2 z^2) (+1 when zero).
Complex ellip_incomplete_f(Complex z, Complex k);
// E(z;k) = int_0^z second_kind_integrand; identical to legendre_e.
Complex ellip_incomplete_e(Complex z, Complex k);

// Same quantities by direct contour quadrature; these are the reference definitions.
Complex ellip_incomplete_f_quadrature(Complex z, Complex k, double tolerance = 1e-13);
Complex ellip_incomplete_e_quadrature(Complex z, Complex k, double tolerance = 1e-13);

// The constant -s1*s2 relating ellip_incomplete_f to legendre_f.
double first_kind_branch_factor(Complex z, Complex k);

// Throws BranchPointOnPath if 0 -> z passes through +-1 or +-1/k.
void check_path(Complex z, Complex k);

}  // namespace elliptic
}  // namespace dcqed
