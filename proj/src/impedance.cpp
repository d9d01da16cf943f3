#include "dcqed/impedance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dcqed/errors.hpp"

namespace dcqed {

Material aluminum(double impedance_prefactor) {
    return Material{"Al", 87.0, LimitRegime::ExtremeAnomalous, impedance_prefactor, true};
}

Material niobium(double impedance_prefactor) {
    return Material{"Nb", 725.0, LimitRegime::Dirty, impedance_prefactor, true};
}

std::string to_string(LimitRegime regime) {
    return regime == LimitRegime::Dirty ? "Dirty" : "ExtremeAnomalous";
}

LimitRegime regime_from_string(const std::string& text) {
    if (text == "ExtremeAnomalous") return LimitRegime::ExtremeAnomalous;
    if (text == "Dirty") return LimitRegime::Dirty;
    throw ConfigError("unknown limit_regime '" + text + "' (expected ExtremeAnomalous or Dirty)");
}

namespace impedance {

double exponent(LimitRegime regime) {
    return regime == LimitRegime::Dirty ? 0.5 : 1.0 / 3.0;
}

double reduced(const Material& material, double f_ghz) {
    return 2.0 * f_ghz / material.gap_frequency_ghz;
}

ComplexFreq reduced(const Material& material, Complex f_ghz) {
    const double s = 2.0 / material.gap_frequency_ghz;
    return ComplexFreq{s * f_ghz.real(), s * f_ghz.imag()};
}

Complex surface_impedance(const Material& material, ComplexFreq freq) {
    if (!(freq.nu > 0.0) || !(freq.kappa >= 0.0))
        throw DomainError("surface_impedance: require nu > 0 and kappa >= 0");
    if (material.impedance_prefactor == 0.0) return 0.0;
    const double a = material.impedance_prefactor;
    const double p = exponent(material.regime);

    if (freq.kappa == 0.0 && freq.nu <= 2.0) {
        const double sigma2 = -mb::sigma_real_axis(freq.nu).imag();
        return Complex(0.0, a * freq.nu * std::pow(freq.nu * sigma2, -p));
    }
    if (freq.kappa > 0.0 && freq.nu <= 2.0)
        throw DomainError("surface_impedance: complex frequencies are supported above the gap only");

    const Complex sigma =
        freq.kappa == 0.0 ? mb::sigma_real_axis(freq.nu) : mb::sigma_tilde(freq);
    const Complex iw = Complex(0.0, 1.0) * Complex(freq.nu, freq.kappa);
    const Complex w = iw * sigma;
    if (w.imag() == 0.0 && w.real() < 0.0)
        throw BranchCut("surface_impedance: fractional power argument on the negative real axis");
    return a * iw * std::pow(w, -p);
}

Complex surface_impedance_ghz(const Material& material, Complex f_ghz) {
    return surface_impedance(material, reduced(material, f_ghz));
}

Complex epsilon_value(const Material& material, double g_geom, double ell_m, Complex f_ghz) {
    const Complex z = surface_impedance_ghz(material, f_ghz);
    const Complex omega = 2.0 * std::numbers::pi * 1e9 * f_ghz;
    // g Z / (i omega ell) = g (X - i R) / (omega ell)
    return 1.0 + g_geom * Complex(z.imag(), -z.real()) / (omega * ell_m);
}

RefractiveIndex epsilon(const Material& material, double g_geom, double ell_m, double f_ghz) {
    if (!(f_ghz > 0.0)) throw DomainError("epsilon: frequency must be positive");
    return RefractiveIndex{epsilon_value(material, g_geom, ell_m, Complex(f_ghz, 0.0)), f_ghz};
}

namespace {

double resistance(const Material& material, double nu) {
    if (nu <= 2.0) return 0.0;
    return surface_impedance(material, {nu, 0.0}).real();
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    auto g = [&f](Complex x) { return Complex(f(x.real()), 0.0); };
    return elliptic::contour_quadrature(g, {Complex(a, 0.0), Complex(b, 0.0), 1e-11}).value.real();
}

}  // namespace

KKResult kk_check(const Material& material, double probe_nu, const KKGrid& grid) {
    if (!(probe_nu > 0.0)) throw DomainError("kk_check: probe frequency must be positive");
    if (grid.cells < 1) throw DomainError("kk_check: grid needs at least one cell");
    if (!(grid.nu_max >= 100.0)) throw DomainError("kk_check: grid must extend to 50x the gap");
    if (!(probe_nu < grid.nu_max)) throw DomainError("kk_check: probe outside the grid");

    KKResult out;
    out.probe_nu = probe_nu;
    if (material.impedance_prefactor == 0.0) return out;

    const double h = grid.nu_max / grid.cells;
    const double delta = grid.excision_cells * h;
    const bool excise = probe_nu > 2.0;
    if (excise) {
        if (grid.excision_cells > 2.0)
            throw GridTooCoarse("kk_check: excision window wider than two grid cells");
        if (probe_nu - delta <= 2.0 || probe_nu + delta >= grid.nu_max)
            throw GridTooCoarse("kk_check: excision window reaches the gap edge or grid boundary");
    }

    std::vector<double> nodes;
    for (int i = 0; i <= grid.cells; ++i) nodes.push_back(i * h);
    nodes.push_back(2.0);
    if (excise) {
        nodes.push_back(probe_nu - delta);
        nodes.push_back(probe_nu + delta);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    const double p2 = probe_nu * probe_nu;
    auto kernel = [&](double nu) { return resistance(material, nu) / (nu * nu - p2); };
    double lhs = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i], b = nodes[i + 1];
        if (b <= 2.0 || b - a <= 0.0) continue;
        if (excise && a >= probe_nu - delta && b <= probe_nu + delta) continue;
        lhs += integrate(kernel, a, b);
    }
    if (excise) {
        auto smooth = [&](double nu) { return resistance(material, nu) / (nu + probe_nu); };
        const double centre = smooth(probe_nu);
        lhs += integrate([&](double t) { return (smooth(probe_nu + t) - centre) / t; }, -delta,
                         delta);
    }
    if (grid.tail_correction) {
        const double q = 1.0 - exponent(material.regime);
        const double c = material.impedance_prefactor * std::cos(0.5 * std::numbers::pi * q);
        const double ratio = p2 / (grid.nu_max * grid.nu_max);
        double power = std::pow(grid.nu_max, q - 1.0);
        for (int j = 0; j < 200; ++j) {
            const double term = c * power / (2.0 * j + 1.0 - q);
            lhs += term;
            if (std::abs(term) <= 1e-17 * std::abs(lhs)) break;
            power *= ratio;
        }
    }

    const Complex z = surface_impedance(material, {probe_nu, 0.0});
    out.lhs = lhs;
    out.rhs = 0.5 * std::numbers::pi * z.imag() / probe_nu;
    out.residual = (out.lhs - out.rhs) / out.rhs;
    return out;
}

double kk_residual(const Material& material, double probe_nu, const KKGrid& grid) {
    return std::abs(kk_check(material, probe_nu, grid).residual);
}

}  // namespace impedance
}  // namespace dcqed
