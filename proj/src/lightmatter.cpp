#include "dcqed/lightmatter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "dcqed/errors.hpp"

namespace dcqed {
namespace {

Complex mode_epsilon(const Mode& mode, const Material& material, const ResonatorGeometry& g) {
    return impedance::epsilon_value(material, g.g_geom, g.ell_m, mode.frequency());
}

void check_resonance(double omega_q, Complex f) {
    if (std::abs(omega_q - f.real()) < 1e-6 * omega_q)
        throw QubitOnResonance("qubit frequency coincides with a mode frequency");
}

std::vector<double> normalized(const std::vector<double>& terms, double& total) {
    std::vector<double> partial(terms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += terms[i];
        partial[i] = acc;
    }
    total = acc;
    for (auto& v : partial) v = (total == 0.0) ? 0.0 : v / total;
    return partial;
}

}  // namespace

double dimensionless_amplitude(const Mode& mode, const ResonatorGeometry& g, double x) {
    return mode_function(mode, x) * std::sqrt(g.ell_m * g.c * g.length);
}

Complex coupling_strength(const Mode& mode, const QubitParams& qubit, const Material& material,
                          const ResonatorGeometry& geometry) {
    if (!below_gap(mode, material))
        throw AboveGapMode("coupling_strength: mode lies above the gap; use spectral_density");
    const Complex eps = mode_epsilon(mode, material, geometry);
    return qubit.dipole_prefactor * std::sqrt(mode.omega.nu) * psqrt(eps) *
           dimensionless_amplitude(mode, geometry, qubit.x_q);
}

double spectral_density(double f_ghz, const QubitParams& qubit, const std::vector<Mode>& modes,
                        const Material& material, const ResonatorGeometry& geometry) {
    if (f_ghz < 0.0) return -spectral_density(-f_ghz, qubit, modes, material, geometry);
    if (!(impedance::reduced(material, f_ghz) > 2.0))
        throw DomainError("spectral_density: frequency must lie above the gap");
    const double to_ghz = 2.0 * std::numbers::pi * 1e9;
    const Complex g = greens_function(qubit.x_q, qubit.x_q, Complex(f_ghz, 0.0), modes, material,
                                      geometry) *
                      (geometry.ell_m * geometry.c * geometry.length) * to_ghz * to_ghz;
    const Complex eps = impedance::epsilon_value(material, geometry.g_geom, geometry.ell_m, f_ghz);
    const double p2 = qubit.dipole_prefactor * qubit.dipole_prefactor;
    return 2.0 * p2 * f_ghz * f_ghz *
           (-eps.imag() * eps.real() * g.real() + std::norm(eps) * g.imag());
}

ResidueBranches lamb_shift_branches(const Mode& mode, const QubitParams& qubit,
                                    const Material& material, const ResonatorGeometry& geometry) {
    const Complex f = mode.frequency();
    check_resonance(qubit.Omega_q, f);
    const Complex eps = mode_epsilon(mode, material, geometry);
    const Complex q = std::conj(eps) - Complex(0.0, eps.real() * eps.imag()) / eps;
    const double psi = dimensionless_amplitude(mode, geometry, qubit.x_q);
    const double p2 = qubit.dipole_prefactor * qubit.dipole_prefactor;
    const double om = qubit.Omega_q;
    const Complex weight = p2 * psi * psi * q * f;
    const Complex cw = std::conj(weight), cf = std::conj(f);
    return ResidueBranches{0.5 * (weight / (om - f) - weight / (om + f)),
                           0.5 * (cw / (om - cf) - cw / (om + cf))};
}

Complex lamb_shift_term(const Mode& mode, const QubitParams& qubit, const Material& material,
                        const ResonatorGeometry& geometry) {
    const Complex f = mode.frequency();
    check_resonance(qubit.Omega_q, f);
    const Complex eps = mode_epsilon(mode, material, geometry);
    const Complex q = std::conj(eps) - Complex(0.0, eps.real() * eps.imag()) / eps;
    const double psi = dimensionless_amplitude(mode, geometry, qubit.x_q);
    const double p2 = qubit.dipole_prefactor * qubit.dipole_prefactor;
    const double om = qubit.Omega_q;
    const Complex weight = p2 * psi * psi * q * f;
    return weight / (om - f) - std::conj(weight) / (om + std::conj(f));
}

std::vector<Complex> lamb_shift_terms(const std::vector<Mode>& modes, const QubitParams& qubit,
                                      const Material& material, const ResonatorGeometry& geometry) {
    std::vector<Complex> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(lamb_shift_term(m, qubit, material, geometry));
    return out;
}

double cc_comparator_term(const Mode& mode, const QubitParams& qubit,
                          const ResonatorGeometry& geometry) {
    const double f = unloaded_frequency_ghz(mode.k, geometry);
    check_resonance(qubit.Omega_q, Complex(f, 0.0));
    const double psi = dimensionless_amplitude(mode, geometry, qubit.x_q);
    const double p2 = qubit.dipole_prefactor * qubit.dipole_prefactor;
    const double om = qubit.Omega_q;
    return p2 * f * psi * psi * (1.0 / (om - f) - 1.0 / (om + f));
}

int crossing_index(const std::vector<double>& curve, double fraction) {
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve[i] >= fraction) return static_cast<int>(i) + 1;
    return static_cast<int>(curve.size());
}

LambShiftReport lamb_shift_report(const QubitParams& qubit, const Material& material,
                                  const ResonatorGeometry& geometry, int n_max,
                                  const FixedPointOptions& options) {
    if (n_max < 1) throw DomainError("lamb_shift_report: n_max must be at least 1");
    if (!(qubit.Omega_q > 0.0) || qubit.x_q < 0.0 || qubit.x_q > geometry.length)
        throw DomainError("lamb_shift_report: invalid qubit parameters");
    LambShiftReport r;
    r.modes = solve_modes(geometry, material, n_max, options);
    r.per_mode_terms = lamb_shift_terms(r.modes, qubit, material, geometry);

    Complex acc = 0.0;
    for (const auto& t : r.per_mode_terms) {
        acc += t;
        r.partial_sums.push_back(acc);
    }
    const double total = acc.real();
    for (const auto& p : r.partial_sums)
        r.normalized_curve.push_back(total == 0.0 ? 0.0 : p.real() / total);
    r.totals.dispersion = total;

    for (const auto& m : r.modes) {
        const double cc = cc_comparator_term(m, qubit, geometry);
        r.no_dispersion_terms.push_back(cc);
        const bool inside = unloaded_frequency_ghz(m.k, geometry) < material.gap_frequency_ghz;
        r.below_bandgap_terms.push_back(inside ? cc : 0.0);
    }
    r.no_dispersion_curve = normalized(r.no_dispersion_terms, r.totals.no_dispersion);
    r.below_bandgap_curve = normalized(r.below_bandgap_terms, r.totals.below_bandgap);
    r.convergence_index_70pct = crossing_index(r.normalized_curve);
    r.no_dispersion_index_70pct = crossing_index(r.no_dispersion_curve);
    r.truncation_monotone = std::abs(r.totals.below_bandgap) <= std::abs(r.totals.no_dispersion);
    return r;
}

LambShiftReport rescale_to_target(const LambShiftReport& report, double target_mhz) {
    if (report.totals.no_dispersion == 0.0)
        throw DomainError("rescale_to_target: no-dispersion total is zero");
    const double s = target_mhz / report.totals.no_dispersion;
    if (!(s > 0.0)) throw DomainError("rescale_to_target: target has the opposite sign");
    LambShiftReport out = report;
    for (auto& t : out.per_mode_terms) t *= s;
    for (auto& t : out.partial_sums) t *= s;
    for (auto& t : out.no_dispersion_terms) t *= s;
    for (auto& t : out.below_bandgap_terms) t *= s;
    out.totals.dispersion *= s;
    out.totals.below_bandgap *= s;
    out.totals.no_dispersion = target_mhz;
    return out;
}

double naive_cutoff(double C_s, double z0) {
    if (!(C_s > 0.0) || !(z0 > 0.0)) throw DomainError("naive_cutoff: C_s and Z0 must be positive");
    return 1.0 / (z0 * C_s);
}

double calibrate_impedance_prefactor(Material material, const ResonatorGeometry& geometry,
                                     double red_shift, const FixedPointOptions& options) {
    if (!(red_shift > 0.0 && red_shift < 0.5))
        throw DomainError("calibrate_impedance_prefactor: red shift must lie in (0, 0.5)");
    const double k1 = secular_roots(geometry, 1).front();
    const double f0 = unloaded_frequency_ghz(k1, geometry);
    if (!(impedance::reduced(material, f0) < 2.0))
        throw DomainError("calibrate_impedance_prefactor: fundamental lies above the gap");
    auto shift = [&](double log_a) {
        material.impedance_prefactor = std::exp(log_a);
        const auto fp = fixed_point_eigenfrequency(k1, material, geometry, options);
        return 1.0 - fp.f_ghz.real() / f0 - red_shift;
    };
    double lo = std::log(1e-12), hi = std::log(1e-6);
    while (shift(hi) < 0.0) {
        lo = hi;
        hi += std::log(4.0);
        if (hi > std::log(1e6))
            throw DomainError("calibrate_impedance_prefactor: red shift not reachable");
    }
    boost::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        shift, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return std::exp(0.5 * (bracket.first + bracket.second));
}

}  // namespace dcqed
