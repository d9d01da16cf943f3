#include "dcqed/mattis_bardeen.hpp"

#include <cmath>
#include <numbers>

#include "dcqed/errors.hpp"

namespace dcqed::mb {
namespace {

using elliptic::carlson_rd;
using elliptic::carlson_rf;

void check_freq(ComplexFreq f, double eps_gap) {
    if (!(f.nu > 0.0) || !(f.kappa >= 0.0) || !std::isfinite(f.nu) || !std::isfinite(f.kappa))
        throw DomainError("conductivity: require nu > 0 and kappa >= 0");
    if (std::abs(f.nu - 2.0) < eps_gap && f.kappa < eps_gap)
        throw GapSingularity("conductivity: frequency inside the gap guard band");
}

// (1 - 1/k) F(z;k) + E(z;k)/k written without the 1/k cancellation.
Complex combined(Complex z, Complex k) {
    elliptic::check_path(z, k);
    const Complex z2 = z * z;
    const Complex x = 1.0 - z2, y = 1.0 - k * k * z2;
    return z * carlson_rf(x, y, 1.0) - k * z2 * z / 3.0 * carlson_rd(x, y, 1.0);
}

Complex combined_complete(Complex k) {
    const Complex mc = 1.0 - k * k;
    return carlson_rf(0.0, mc, 1.0) - k / 3.0 * carlson_rd(0.0, mc, 1.0);
}

// int_p^q g(E) dE with E = m + h sin t, removing inverse square-root endpoint behaviour.
elliptic::QuadResult sine_substituted(const std::function<Complex(double)>& g, double p, double q,
                                      double tol) {
    const double m = 0.5 * (p + q);
    const double h = 0.5 * (q - p);
    auto integrand = [&](Complex t) {
        const double tr = t.real();
        return g(m + h * std::sin(tr)) * (h * std::cos(tr));
    };
    return elliptic::contour_quadrature(
        integrand, {Complex(-0.5 * std::numbers::pi, 0.0), Complex(0.5 * std::numbers::pi, 0.0), tol});
}

}  // namespace

EllipticModuli moduli(ComplexFreq freq, double eps_gap) {
    check_freq(freq, eps_gap);
    const Complex a(0.5 * freq.nu, -0.5 * freq.kappa);
    const Complex abar = std::conj(a);
    EllipticModuli m;
    m.k = (a - 1.0) / (a + 1.0);
    m.k_prime = psqrt(1.0 - m.k * m.k);
    m.k1 = (abar + 1.0) / (a - 1.0);
    m.phase_theta = (abar - 1.0) / (a - 1.0);
    m.phase_phi = m.phase_theta;
    return m;
}

SigmaParts sigma_tilde_parts(ComplexFreq freq, double eps_gap) {
    check_freq(freq, eps_gap);
    if (freq.nu <= 2.0)
        throw DomainError("sigma_tilde: continuation is defined above the gap only");
    const Complex a(0.5 * freq.nu, -0.5 * freq.kappa);
    const EllipticModuli m = moduli(freq, eps_gap);
    const Complex pref = (a - 1.0) / (2.0 * a);

    if (freq.kappa == 0.0) {
        const double nu = freq.nu;
        const double k = (nu - 2.0) / (nu + 2.0);
        const double kp = std::sqrt(1.0 - k * k);
        const double s1 = (pref * 2.0 * combined_complete(k)).real();
        const Complex kkp = elliptic::ellip_complete_k(kp);
        const Complex ekp = elliptic::ellip_complete_e(kp);
        const double s2 = 0.5 * ((1.0 + 2.0 / nu) * ekp - (1.0 - 2.0 / nu) * kkp).real();
        return SigmaParts{Complex(s1, 0.0), Complex(0.0, -s2)};
    }

    const Complex l_theta = combined(m.phase_theta, m.k);
    const Complex l_one = combined_complete(m.k);
    const Complex l_k1 = combined(m.k1, m.k);
    return SigmaParts{pref * (l_theta + l_one), pref * (l_k1 - l_theta)};
}

Complex sigma_tilde(ComplexFreq freq, double eps_gap) {
    return sigma_tilde_parts(freq, eps_gap).total();
}

Complex sigma_real_axis(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("sigma_real_axis: require nu > 0");
    if (nu > 2.0) return sigma_tilde_parts({nu, 0.0}, 0.0).total();
    // E = 1 - nu/2 + (nu/2) sin t; the endpoint square roots cancel against the Jacobian.
    const double m = 1.0 - 0.5 * nu, h = 0.5 * nu;
    auto integrand = [=](Complex t) {
        const double e = m + h * std::sin(t.real());
        return Complex((e * e + nu * e + 1.0) / (std::sqrt(1.0 + e) * std::sqrt(e + nu + 1.0)), 0.0);
    };
    const double s2 = elliptic::contour_quadrature(
                          integrand, {Complex(-0.5 * std::numbers::pi, 0.0),
                                      Complex(0.5 * std::numbers::pi, 0.0), 1e-12})
                          .value.real() /
                      nu;
    return Complex(0.0, -s2);
}

Complex oracle_integrand(double energy, double nu, double kappa) {
    const double u = energy + nu;
    const Complex v(energy, kappa);
    const Complex w(energy * energy - kappa * kappa - 1.0, 2.0 * energy * kappa);
    return (u * v + 1.0) / (psqrt(Complex(u * u - 1.0, 0.0)) * std::sqrt(w));
}

OracleResult sigma_oracle_detail(ComplexFreq freq, const OracleOptions& options) {
    check_freq(freq, kGapGuard);
    if (freq.nu <= 2.0) throw DomainError("sigma_oracle: requires nu > 2");
    const double nu = freq.nu, kappa = freq.kappa;
    auto f = [nu, kappa](double e) { return oracle_integrand(e, nu, kappa); };
    auto neg = [&f](double e) { return -f(e); };
    const Complex denom(nu, -kappa);

    OracleResult r;
    const auto q1 = sine_substituted(neg, 1.0 - nu, -1.0, options.tolerance);
    r.region_i = q1.value / denom;
    r.error = q1.error / std::abs(denom);
    if (!options.drop_residual_regions) {
        const auto q2 = sine_substituted(neg, -1.0, 0.0, options.tolerance);
        const auto q3 = sine_substituted(f, 0.0, 1.0, options.tolerance);
        r.region_ii = q2.value / denom;
        r.region_iii = q3.value / denom;
        r.error += (q2.error + q3.error) / std::abs(denom);
    }
    r.value = r.region_i + r.region_ii + r.region_iii;
    return r;
}

Complex sigma_oracle(ComplexFreq freq, const OracleOptions& options) {
    return sigma_oracle_detail(freq, options).value;
}

}  // namespace dcqed::mb
