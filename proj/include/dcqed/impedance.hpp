#pragma once

#include <string>

#include "dcqed/mattis_bardeen.hpp"

namespace dcqed {

enum class LimitRegime { ExtremeAnomalous, Dirty };

struct Material {
    std::string name;
    double gap_frequency_ghz = 0.0;  // 2*Delta/h
    LimitRegime regime = LimitRegime::ExtremeAnomalous;
    double impedance_prefactor = 0.0;  // Ohm; zero means a perfect conductor
    bool gap_is_default = false;
};

// Literature gap values; flagged through gap_is_default.
Material aluminum(double impedance_prefactor);
Material niobium(double impedance_prefactor);

std::string to_string(LimitRegime regime);
LimitRegime regime_from_string(const std::string& text);

namespace impedance {

// Fractional power p in Z_s ~ omega (omega sigma)^{-p}.
double exponent(LimitRegime regime);

// Reduced frequency hbar*omega/Delta of an ordinary frequency in GHz.
double reduced(const Material& material, double f_ghz);
ComplexFreq reduced(const Material& material, Complex f_ghz);

// Z_s = A (i w) (i w sigma)^{-p} with w = nu + i kappa, in Ohm. The factor i^{1-p}
// relative to w (w sigma)^{-p} fixes the phase so that R_s vanishes below the gap.
Complex surface_impedance(const Material& material, ComplexFreq freq);
Complex surface_impedance_ghz(const Material& material, Complex f_ghz);

struct RefractiveIndex {
    Complex value;
    double frequency_ghz = 0.0;
};

// eps = 1 + g Z_s / (i omega ell_m), omega = 2 pi f. Complex f is allowed above the gap.
Complex epsilon_value(const Material& material, double g_geom, double ell_m, Complex f_ghz);
RefractiveIndex epsilon(const Material& material, double g_geom, double ell_m, double f_ghz);

struct KKGrid {
    double nu_max = 100.0;  // reduced units, 50x the gap
    int cells = 2000;
    double excision_cells = 1.0;
    bool tail_correction = true;
};

struct KKResult {
    double probe_nu = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

// PV int_0^inf R_s(w)/(w^2 - w'^2) dw against (pi/2) X_s(w')/w', in reduced units.
// Beyond nu_max the integral is closed with the large-frequency power law of R_s.
KKResult kk_check(const Material& material, double probe_nu, const KKGrid& grid = {});
double kk_residual(const Material& material, double probe_nu, const KKGrid& grid = {});

}  // namespace impedance
}  // namespace dcqed
