#pragma once

#include <functional>
#include <vector>

#include "dcqed/impedance.hpp"

namespace dcqed {

struct QubitLoad {
    double x = 0.0;    // m
    double C_s = 0.0;  // F
    double gamma = 1.0;
};

struct ResonatorGeometry {
    double length = 0.0;  // m
    double ell_m = 0.0;   // H/m
    double c = 0.0;       // F/m
    double g_geom = 0.0;  // 1/m
    std::vector<QubitLoad> qubits;
};

// Throws DomainError when a field is out of range or qubits are not strictly ordered.
void validate(const ResonatorGeometry& geometry);

// ell_m and c from a characteristic impedance and the unloaded fundamental f0 = 1/(2 L sqrt(ell c)).
ResonatorGeometry reconstruct_geometry(double f0_ghz, double g_geom, double z0 = 50.0,
                                       double length = 0.01);

// Psi(x) = a cos(k (x - x0)) + b sin(k (x - x0)) on [x0, x1], already normalized.
struct ModeSegment {
    double x0 = 0.0;
    double x1 = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Mode {
    int n = 0;
    double k = 0.0;     // 1/m
    ComplexFreq omega;  // GHz, nu + i kappa; kappa > 0 decays for exp(i omega t)
    double norm = 1.0;  // factor applied to the unit-amplitude shooting solution
    std::vector<ModeSegment> segments;

    Complex frequency() const { return {omega.nu, omega.kappa}; }
};

struct FixedPointOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double relaxation = 0.5;
    double eps_gap = mb::kGapGuard;
};

struct FixedPointResult {
    Complex f_ghz;
    int iterations = 0;
    bool gap_straddle = false;
    double residual = 0.0;
};

// Determinant entry of the transfer matrix; a single qubit gives
// sin(kL) + k (C_s/c) cos(k x_q) cos(k (L - x_q)).
double secular_value(double k, const ResonatorGeometry& geometry);

// Number of positive roots below k from the phase of the shooting solution.
int root_count(double k, const ResonatorGeometry& geometry);

std::vector<double> secular_roots(const ResonatorGeometry& geometry, int n_max);

double unloaded_frequency_ghz(double k, const ResonatorGeometry& geometry);

// f^2 = f0^2 + i g f Z_s(f) / (2 pi ell_m), frequencies in GHz.
FixedPointResult fixed_point_eigenfrequency(double k, const Material& material,
                                            const ResonatorGeometry& geometry,
                                            const FixedPointOptions& options = {});
FixedPointResult fixed_point_eigenfrequency(double k, const Material& material,
                                            const ResonatorGeometry& geometry,
                                            const FixedPointOptions& options, Complex seed_ghz);

// Normalized mode shape; omega is set to the dispersion-free frequency.
Mode mode_shape(int n, double k, const ResonatorGeometry& geometry);
// Constant n = 0 mode at zero frequency, needed for completeness.
Mode zero_mode(const ResonatorGeometry& geometry);

// Roots, shapes and complex eigenfrequencies of the first n_max modes.
std::vector<Mode> solve_modes(const ResonatorGeometry& geometry, const Material& material,
                              int n_max, const FixedPointOptions& options = {});

bool below_gap(const Mode& mode, const Material& material);

double mode_function(const Mode& mode, double x);
// One-sided derivative; at a qubit position the side selects the adjacent segment.
double mode_derivative(const Mode& mode, double x, bool right_side);

// sum_n Psi_n(x) Psi_n(x') / (omega^2 eps(omega) - omega_n0^2) including the n = 0 mode,
// with omega = 2 pi f and eps evaluated at the probe frequency. SI units.
Complex greens_function(double x, double x_prime, Complex f_ghz, const std::vector<Mode>& modes,
                        const Material& material, const ResonatorGeometry& geometry);

// Closed-form solution of G'' + omega^2 ell c(x) eps G = delta(x - x') with Neumann ends.
Complex greens_function_exact(double x, double x_prime, Complex f_ghz, const Material& material,
                              const ResonatorGeometry& geometry);

double completeness_residual(const ResonatorGeometry& geometry, const std::vector<Mode>& modes,
                             const std::function<double(double)>& test_function);

struct GreensIdentity {
    Complex lhs;
    Complex rhs;
    double residual = 0.0;
};

// Left side by quadrature over x' with the truncated expansion; right side from the
// closed-form Green's function, so the residual measures modal truncation.
GreensIdentity greens_identity(double x1, double x, double f_ghz, const ResonatorGeometry& geometry,
                               const Material& material, const std::vector<Mode>& modes);
double greens_identity_residual(double x1, double x, double f_ghz,
                                const ResonatorGeometry& geometry, const Material& material,
                                const std::vector<Mode>& modes);

}  // namespace dcqed
