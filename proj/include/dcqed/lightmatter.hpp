#pragma once

#include <vector>

#include "dcqed/modes.hpp"

namespace dcqed {

struct QubitParams {
    double Omega_q = 5.0;  // GHz
    double x_q = 0.0;      // m
    double dipole_prefactor = 1.0;
};

// Shifts are reported in MHz per unit dipole_prefactor^2.
struct LambShiftTotals {
    double dispersion = 0.0;
    double below_bandgap = 0.0;
    double no_dispersion = 0.0;
};

struct LambShiftReport {
    std::vector<Complex> per_mode_terms;
    std::vector<Complex> partial_sums;
    std::vector<double> normalized_curve;
    std::vector<double> no_dispersion_terms;
    std::vector<double> no_dispersion_curve;
    std::vector<double> below_bandgap_terms;
    std::vector<double> below_bandgap_curve;
    LambShiftTotals totals;
    int convergence_index_70pct = 0;
    int no_dispersion_index_70pct = 0;
    bool truncation_monotone = true;
    std::vector<Mode> modes;
};

// Psi_n(x) * sqrt(ell_m c L); equals sqrt(2) cos(n pi x / L) without loading.
double dimensionless_amplitude(const Mode& mode, const ResonatorGeometry& geometry, double x);

// g_n = prefactor * sqrt(f_n) * sqrt(eps(f_n)) * Psi~_n(x_q), below the gap only.
Complex coupling_strength(const Mode& mode, const QubitParams& qubit, const Material& material,
                          const ResonatorGeometry& geometry);

// 2 prefactor^2 f^2 [(-Im eps) Re eps Re G~ + |eps|^2 Im G~] at (x_q, x_q), with
// G~ = sum_n Psi~_n^2 / (f^2 eps(f) - f_n0^2). Odd in f by construction.
double spectral_density(double f_ghz, const QubitParams& qubit, const std::vector<Mode>& modes,
                        const Material& material, const ResonatorGeometry& geometry);

// Residue term of one mode: prefactor^2 Psi~^2 [Q f_n/(Omega - f_n) - conj(Q f_n)/(Omega + conj f_n)]
// with Q = conj(eps) - i Re(eps) Im(eps) / eps and eps = eps(f_n). The second piece is the
// pole at -conj(f_n). Re(term) is the physical shift.
Complex lamb_shift_term(const Mode& mode, const QubitParams& qubit, const Material& material,
                        const ResonatorGeometry& geometry);
std::vector<Complex> lamb_shift_terms(const std::vector<Mode>& modes, const QubitParams& qubit,
                                      const Material& material, const ResonatorGeometry& geometry);

// The two residue branches of one mode: the pole at f_n and its conjugate partner at conj(f_n).
// Their sum is real.
struct ResidueBranches {
    Complex at_pole;
    Complex at_conjugate;
};
ResidueBranches lamb_shift_branches(const Mode& mode, const QubitParams& qubit,
                                    const Material& material, const ResonatorGeometry& geometry);

// prefactor^2 f_n Psi~_n^2 (1/(Omega - f_n) - 1/(Omega + f_n)) at the dispersion-free frequency.
double cc_comparator_term(const Mode& mode, const QubitParams& qubit,
                          const ResonatorGeometry& geometry);

LambShiftReport lamb_shift_report(const QubitParams& qubit, const Material& material,
                                  const ResonatorGeometry& geometry, int n_max,
                                  const FixedPointOptions& options = {});

// Scales every shift so that totals.no_dispersion equals target_mhz; curves are unchanged.
LambShiftReport rescale_to_target(const LambShiftReport& report, double target_mhz);

// Smallest M with curve[M-1] >= fraction.
int crossing_index(const std::vector<double>& curve, double fraction = 0.70);

// omega = 1 / (Z0 C_s) in rad/s.
double naive_cutoff(double C_s, double z0);

// Impedance prefactor A that red-shifts the fundamental by the given fraction.
double calibrate_impedance_prefactor(Material material, const ResonatorGeometry& geometry,
                                     double red_shift = 0.02, const FixedPointOptions& options = {});

}  // namespace dcqed
