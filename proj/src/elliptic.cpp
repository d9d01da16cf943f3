#include "dcqed/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "dcqed/errors.hpp"

namespace dcqed {

Complex psqrt(Complex z) {
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    return std::sqrt(z);
}

namespace elliptic {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Half-path x(t) = origin + dir * t, t in [t0, t1], scaled by sign.
struct Panel {
    int half;
    double t0, t1;
    Complex value;
    double error;
    double absval;
    bool bad;
};

struct Half {
    Complex origin;
    Complex dir;
    double sign;
};

Panel evaluate(const std::function<Complex(Complex)>& f, const Half& h, int half, double t0,
               double t1) {
    Panel p{half, t0, t1, {}, 0.0, 0.0, false};
    const double c = 0.5 * (t0 + t1);
    const double r = 0.5 * (t1 - t0);
    Complex kron = 0.0;
    Complex gauss = 0.0;
    double absval = 0.0;
    for (int j = 0; j < 8; ++j) {
        const int reps = (j == 7) ? 1 : 2;
        for (int s = 0; s < reps; ++s) {
            const double t = (s == 0) ? c - r * kXgk[j] : c + r * kXgk[j];
            const Complex v = f(h.origin + h.dir * t);
            if (!finite(v)) {
                p.bad = true;
                p.error = std::numeric_limits<double>::infinity();
                p.value = 0.0;
                return p;
            }
            kron += kWgk[j] * v;
            absval += kWgk[j] * std::abs(v);
            if (j % 2 == 1) gauss += kWg[j / 2] * v;
        }
    }
    const Complex scale = h.sign * h.dir * r;
    p.value = kron * scale;
    p.error = std::abs((kron - gauss) * scale);
    p.absval = absval * std::abs(scale);
    return p;
}

Complex rf_impl(Complex x, Complex y, Complex z) {
    constexpr double kErrTol = 0.0008;
    constexpr double kThird = 1.0 / 3.0;
    Complex ave;
    Complex dx, dy, dz;
    for (int it = 0; it < 200; ++it) {
        const Complex sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const Complex lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = kThird * (x + y + z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kErrTol) break;
    }
    const Complex e2 = dx * dy - dz * dz;
    const Complex e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / std::sqrt(ave);
}

Complex rd_impl(Complex x, Complex y, Complex z) {
    constexpr double kErrTol = 0.0005;
    constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 6.0, C3 = 9.0 / 22.0, C4 = 3.0 / 26.0,
                     C5 = 0.25 * C3, C6 = 1.5 * C4;
    Complex sum = 0.0;
    double fac = 1.0;
    Complex ave, dx, dy, dz;
    for (int it = 0; it < 200; ++it) {
        const Complex sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const Complex lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = 0.2 * (x + y + 3.0 * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kErrTol) break;
    }
    const Complex ea = dx * dy, eb = dz * dz;
    const Complex ec = ea - eb, ed = ea - 6.0 * eb;
    const Complex ee = ed + ec + ec;
    return 3.0 * sum +
           fac * (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) +
                  dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea))) /
               (ave * std::sqrt(ave));
}

bool on_cut(Complex w) { return w.imag() == 0.0 && w.real() < 0.0; }

void check_carlson_args(Complex x, Complex y, Complex z) {
    const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
    if (zeros >= 2) throw DomainError("carlson: two or more arguments are zero");
    if (on_cut(x) || on_cut(y) || on_cut(z))
        throw DomainError("carlson: argument on the negative real axis");
    if (!finite(x) || !finite(y) || !finite(z)) throw DomainError("carlson: non-finite argument");
}

double sign_of_imag(Complex w) { return w.imag() < 0.0 ? -1.0 : 1.0; }

}  // namespace

QuadResult contour_quadrature(const std::function<Complex(Complex)>& f,
                              const ContourSegment& segment) {
    if (segment.start == segment.end) throw DomainError("contour_quadrature: empty segment");
    if (!(segment.tolerance > 0.0 && segment.tolerance <= 1e-2))
        throw DomainError("contour_quadrature: tolerance must lie in (0, 1e-2]");

    // Each half is parameterized from its outer endpoint toward the midpoint, so that
    // endpoint singularities sit at t = 0 where the parameter has full resolution.
    const Complex mid = 0.5 * (segment.start + segment.end);
    const std::array<Half, 2> halves = {Half{segment.start, mid - segment.start, 1.0},
                                        Half{segment.end, mid - segment.end, -1.0}};

    std::vector<Panel> panels = {evaluate(f, halves[0], 0, 0.0, 1.0),
                                 evaluate(f, halves[1], 1, 0.0, 1.0)};
    std::vector<bool> frozen(2, false);

    while (true) {
        Complex value = 0.0;
        double error = 0.0, absval = 0.0;
        for (const auto& p : panels) {
            value += p.value;
            error += p.error;
            absval += p.absval;
        }
        const double tol = std::max(segment.tolerance * std::abs(value), 64.0 * kEps * absval);
        if (error <= tol) return QuadResult{value, error, static_cast<int>(panels.size())};

        int worst = -1;
        for (int i = 0; i < static_cast<int>(panels.size()); ++i)
            if (!frozen[i] && (worst < 0 || panels[i].error > panels[worst].error)) worst = i;
        if (worst < 0) return QuadResult{value, error, static_cast<int>(panels.size())};

        const Panel p = panels[worst];
        const Half& h = halves[p.half];
        // Narrowest useful panel: a few ulps of the parameter or of the point x(t).
        const double xscale = std::abs(h.origin + h.dir * p.t1) / std::abs(h.dir);
        const double tiny = 8.0 * kEps * std::max({p.t1, xscale, 1e-290});
        // Relative noise floor of f(x(t)) when x is only resolved to an ulp of |x|.
        const double floor = 64.0 * kEps * std::max(1.0, xscale / (0.5 * (p.t0 + p.t1)));
        if (p.t1 - p.t0 <= tiny || (!p.bad && p.error <= floor * p.absval)) {
            if (p.bad && p.t0 != 0.0)
                throw SingularInterior(
                    "contour_quadrature: non-finite integrand after maximal refinement");
            if (p.bad) {
                // Endpoint panel below the resolution of x: drop it and charge the
                // neighbouring panel's magnitude to the error estimate.
                double neighbour = 0.0;
                for (const auto& q : panels)
                    if (q.half == p.half && q.t0 == p.t1) neighbour = std::abs(q.value);
                panels[worst].value = 0.0;
                panels[worst].error = neighbour;
                panels[worst].bad = false;
            }
            frozen[worst] = true;
            continue;
        }
        if (static_cast<int>(panels.size()) >= kPanelBudget)
            throw NonConvergence("contour_quadrature: panel budget exhausted", value, error);

        const double tm = 0.5 * (p.t0 + p.t1);
        panels[worst] = evaluate(f, halves[p.half], p.half, p.t0, tm);
        panels.push_back(evaluate(f, halves[p.half], p.half, tm, p.t1));
        frozen.push_back(false);
    }
}

Complex carlson_rf(Complex x, Complex y, Complex z) {
    check_carlson_args(x, y, z);
    return rf_impl(x, y, z);
}

Complex carlson_rd(Complex x, Complex y, Complex z) {
    check_carlson_args(x, y, z);
    if (z == 0.0) throw DomainError("carlson_rd: third argument is zero");
    return rd_impl(x, y, z);
}

Complex ellip_complete_k(Complex k) {
    const Complex m = k * k;
    if (m.imag() == 0.0 && m.real() >= 1.0)
        throw DomainError("ellip_complete_k: modulus squared on the branch cut [1, inf)");
    return carlson_rf(0.0, 1.0 - m, 1.0);
}

Complex ellip_complete_e(Complex k) {
    const Complex m = k * k;
    if (m == 1.0) return 1.0;
    if (m.imag() == 0.0 && m.real() > 1.0)
        throw DomainError("ellip_complete_e: modulus squared on the branch cut [1, inf)");
    const Complex mc = 1.0 - m;
    return carlson_rf(0.0, mc, 1.0) - m / 3.0 * carlson_rd(0.0, mc, 1.0);
}

void check_path(Complex z, Complex k) {
    std::vector<Complex> points = {1.0, -1.0};
    if (k != 0.0) {
        points.push_back(1.0 / k);
        points.push_back(-1.0 / k);
    }
    for (const Complex b : points) {
        const Complex t = b / z;
        if (std::abs(t.imag()) <= 1e-14 * std::abs(t) && t.real() > 0.0 && t.real() <= 1.0 + 1e-14)
            throw BranchPointOnPath("elliptic: straight path from 0 passes through a branch point");
    }
}

Complex legendre_f(Complex z, Complex k) {
    if (z == 0.0) return 0.0;
    check_path(z, k);
    const Complex z2 = z * z;
    return z * rf_impl(1.0 - z2, 1.0 - k * k * z2, 1.0);
}

Complex legendre_e(Complex z, Complex k) {
    if (z == 0.0) return 0.0;
    check_path(z, k);
    const Complex z2 = z * z;
    const Complex m = k * k;
    const Complex x = 1.0 - z2, y = 1.0 - m * z2;
    return z * rf_impl(x, y, 1.0) - m * z2 * z / 3.0 * rd_impl(x, y, 1.0);
}

Complex first_kind_integrand(Complex x, Complex k) {
    return 1.0 / (psqrt(x * x - 1.0) * psqrt(k * k * x * x - 1.0));
}

Complex second_kind_integrand(Complex x, Complex k) {
    return psqrt(1.0 - k * k * x * x) / psqrt(1.0 - x * x);
}

double first_kind_branch_factor(Complex z, Complex k) {
    const Complex z2 = z * z;
    return -sign_of_imag(z2) * sign_of_imag(k * k * z2);
}

Complex ellip_incomplete_f(Complex z, Complex k) {
    if (z == 0.0) return 0.0;
    return first_kind_branch_factor(z, k) * legendre_f(z, k);
}

Complex ellip_incomplete_e(Complex z, Complex k) { return legendre_e(z, k); }

Complex ellip_incomplete_f_quadrature(Complex z, Complex k, double tolerance) {
    if (z == 0.0) return 0.0;
    check_path(z, k);
    return contour_quadrature([k](Complex x) { return first_kind_integrand(x, k); },
                              {0.0, z, tolerance})
        .value;
}

Complex ellip_incomplete_e_quadrature(Complex z, Complex k, double tolerance) {
    if (z == 0.0) return 0.0;
    check_path(z, k);
    return contour_quadrature([k](Complex x) { return second_kind_integrand(x, k); },
                              {0.0, z, tolerance})
        .value;
}

}  // namespace elliptic
}  // namespace dcqed
