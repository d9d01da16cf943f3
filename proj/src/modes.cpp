#include "dcqed/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dcqed/errors.hpp"

namespace dcqed {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGiga = 1e9;

struct Shot {
    double psi;
    double p;  // psi' / k
};

// Walks the unit-amplitude solution from x = 0; on_segment receives every inter-qubit
// segment with its starting (psi, psi'/k). Returns the state at x = L.
template <typename F>
Shot shoot(double k, const ResonatorGeometry& g, F&& on_segment) {
    Shot s{1.0, 0.0};
    double x = 0.0;
    auto advance = [&](double to) {
        const double d = to - x;
        on_segment(x, to, s);
        const double cs = std::cos(k * d), sn = std::sin(k * d);
        s = Shot{cs * s.psi + sn * s.p, -sn * s.psi + cs * s.p};
        x = to;
    };
    for (const auto& q : g.qubits) {
        advance(q.x);
        s.p -= k * (q.C_s / g.c) * s.psi;
    }
    advance(g.length);
    return s;
}

double segment_square_integral(double a, double b, double k, double d) {
    if (k == 0.0) return a * a * d;
    return 0.5 * (a * a + b * b) * d + (a * a - b * b) * std::sin(2.0 * k * d) / (4.0 * k) +
           a * b * (1.0 - std::cos(2.0 * k * d)) / (2.0 * k);
}

double bisect_root(const ResonatorGeometry& g, double lo, double hi) {
    const double len = g.length;
    double flo = secular_value(lo, g);
    while ((hi - lo) * len > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = secular_value(mid, g);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Roots of the secular function in (lo, hi] located by sign changes on a sub-grid.
std::vector<double> sign_change_roots(const ResonatorGeometry& g, double lo, double hi, int pieces) {
    std::vector<double> out;
    double a = lo;
    double fa = secular_value(a, g);
    for (int i = 1; i <= pieces; ++i) {
        const double b = lo + (hi - lo) * i / pieces;
        const double fb = secular_value(b, g);
        if (fb == 0.0) {
            out.push_back(b);
        } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
            out.push_back(bisect_root(g, a, b));
        }
        a = b;
        fa = fb;
    }
    return out;
}

// Smallest k in (lo, hi] with root_count(k) >= target.
double count_bisect(const ResonatorGeometry& g, double lo, double hi, int target) {
    while ((hi - lo) * g.length > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (root_count(mid, g) >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

Complex eps_at(const Material& material, const ResonatorGeometry& g, Complex f_ghz) {
    if (f_ghz.real() < 0.0)
        return std::conj(impedance::epsilon_value(material, g.g_geom, g.ell_m, -std::conj(f_ghz)));
    return impedance::epsilon_value(material, g.g_geom, g.ell_m, f_ghz);
}

Complex angular(Complex f_ghz) { return 2.0 * kPi * kGiga * f_ghz; }

double omega0_squared(const Mode& m, const ResonatorGeometry& g) {
    return m.k * m.k / (g.ell_m * g.c);
}

struct Node {
    double x;
    double w;
};

// Composite 8-point Gauss-Legendre nodes on each inter-qubit interval.
std::vector<Node> quadrature_nodes(const ResonatorGeometry& g, int panels_total) {
    static constexpr std::array<double, 4> xs = {0.1834346424956498, 0.5255324099163290,
                                                 0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> ws = {0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
    std::vector<double> cuts = {0.0};
    for (const auto& q : g.qubits)
        if (q.x > cuts.back()) cuts.push_back(q.x);
    if (g.length > cuts.back()) cuts.push_back(g.length);
    std::vector<Node> nodes;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        const int panels =
            std::max(1, static_cast<int>(std::ceil(panels_total * (b - a) / g.length)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * h;
            for (int j = 0; j < 4; ++j) {
                nodes.push_back({c - 0.5 * h * xs[j], 0.5 * h * ws[j]});
                nodes.push_back({c + 0.5 * h * xs[j], 0.5 * h * ws[j]});
            }
        }
    }
    return nodes;
}

}  // namespace

void validate(const ResonatorGeometry& g) {
    if (!(g.length > 0.0) || !(g.ell_m > 0.0) || !(g.c > 0.0) || !(g.g_geom >= 0.0))
        throw DomainError("geometry: length, ell_m and c must be positive, g_geom non-negative");
    double prev = -1.0;
    for (const auto& q : g.qubits) {
        if (q.x < 0.0 || q.x > g.length) throw DomainError("geometry: qubit outside [0, L]");
        if (!(q.C_s >= 0.0)) throw DomainError("geometry: negative shunt capacitance");
        if (q.x <= prev) throw DomainError("geometry: qubit positions must be strictly increasing");
        prev = q.x;
    }
}

ResonatorGeometry reconstruct_geometry(double f0_ghz, double g_geom, double z0, double length) {
    if (!(f0_ghz > 0.0) || !(z0 > 0.0) || !(length > 0.0))
        throw DomainError("reconstruct_geometry: f0, z0 and length must be positive");
    const double root_lc = 1.0 / (2.0 * length * f0_ghz * kGiga);
    ResonatorGeometry g;
    g.length = length;
    g.ell_m = z0 * root_lc;
    g.c = root_lc / z0;
    g.g_geom = g_geom;
    return g;
}

double secular_value(double k, const ResonatorGeometry& geometry) {
    return -shoot(k, geometry, [](double, double, const Shot&) {}).p;
}

int root_count(double k, const ResonatorGeometry& g) {
    double theta = 0.0;
    double psi = 1.0, p = 0.0, x = 0.0;
    auto advance = [&](double to) {
        const double d = to - x;
        const double cs = std::cos(k * d), sn = std::sin(k * d);
        const double np = cs * psi + sn * p;
        p = -sn * psi + cs * p;
        psi = np;
        theta += k * d;
        x = to;
    };
    for (const auto& q : g.qubits) {
        advance(q.x);
        const double before = std::atan2(-p, psi);
        p -= k * (q.C_s / g.c) * psi;
        const double after = std::atan2(-p, psi);
        theta += std::remainder(after - before, 2.0 * kPi);
    }
    advance(g.length);
    return static_cast<int>(std::floor(theta / kPi));
}

std::vector<double> secular_roots(const ResonatorGeometry& geometry, int n_max) {
    validate(geometry);
    if (n_max < 1) throw DomainError("secular_roots: n_max must be at least 1");
    const double step = kPi / (8.0 * geometry.length);
    std::vector<double> roots;
    // The grid is offset by half a step so unloaded roots n*pi/L never fall on a node.
    double lo = 1e-6 * step;
    int count_lo = root_count(lo, geometry);
    for (int i = 1; static_cast<int>(roots.size()) < n_max; ++i) {
        const double hi = (i - 0.5) * step;
        const int count_hi = root_count(hi, geometry);
        const int expected = count_hi - count_lo;
        std::vector<double> found = sign_change_roots(geometry, lo, hi, 1);
        if (static_cast<int>(found.size()) != expected)
            found = sign_change_roots(geometry, lo, hi, 16);
        if (static_cast<int>(found.size()) != expected) {
            found.clear();
            for (int m = count_lo + 1; m <= count_hi; ++m)
                found.push_back(count_bisect(geometry, lo, hi, m));
        }
        if (static_cast<int>(found.size()) != expected)
            throw BracketingFailure("secular_roots: root count and sign changes disagree");
        std::sort(found.begin(), found.end());
        roots.insert(roots.end(), found.begin(), found.end());
        lo = hi;
        count_lo = count_hi;
        if (i > 64 * (n_max + 8))
            throw BracketingFailure("secular_roots: scan ran past the expected range");
    }
    roots.resize(n_max);
    // Capacitive loading only lowers k_n below n*pi/L; remove bisection overshoot.
    for (int n = 1; n <= n_max; ++n)
        roots[n - 1] = std::min(roots[n - 1], n * kPi / geometry.length);
    return roots;
}

double unloaded_frequency_ghz(double k, const ResonatorGeometry& g) {
    return k / (2.0 * kPi * std::sqrt(g.ell_m * g.c)) / kGiga;
}

FixedPointResult fixed_point_eigenfrequency(double k, const Material& material,
                                            const ResonatorGeometry& geometry,
                                            const FixedPointOptions& options) {
    return fixed_point_eigenfrequency(k, material, geometry, options,
                                      Complex(unloaded_frequency_ghz(k, geometry), 0.0));
}

FixedPointResult fixed_point_eigenfrequency(double k, const Material& material,
                                            const ResonatorGeometry& geometry,
                                            const FixedPointOptions& options, Complex seed) {
    if (!(k > 0.0)) throw DomainError("fixed_point_eigenfrequency: k must be positive");
    if (!(options.relaxation > 0.0 && options.relaxation <= 1.0))
        throw DomainError("fixed_point_eigenfrequency: relaxation must lie in (0, 1]");
    const double f0 = unloaded_frequency_ghz(k, geometry);
    const double scale = geometry.g_geom / (2.0 * kPi * kGiga * geometry.ell_m);
    const double gap = material.gap_frequency_ghz;
    const double guard = 0.5 * options.eps_gap * gap;

    // Keeps iterates on a well-defined branch: real below the gap, outside the guard band.
    auto admissible = [&](Complex f) {
        if (f.real() < 0.0) f = -f;
        const double nu = 2.0 * f.real() / gap;
        if (nu <= 2.0) f = Complex(f.real(), 0.0);
        if (std::abs(f.real() - 0.5 * gap) < guard && std::abs(f.imag()) < guard)
            f = Complex(f.real() < 0.5 * gap ? 0.5 * gap - 2.0 * guard : 0.5 * gap + 2.0 * guard,
                        f.real() < 0.5 * gap ? 0.0 : f.imag());
        if (f.imag() < 0.0) f = Complex(f.real(), 0.0);
        return f;
    };
    auto rhs = [&](Complex f) {
        const Complex z = impedance::surface_impedance_ghz(material, f);
        return f0 * f0 + Complex(0.0, scale) * f * z;
    };
    auto residual = [](Complex f, Complex r) { return std::abs(f * f - r) / std::norm(f); };
    auto principal = [](Complex r) {
        Complex s = std::sqrt(r);
        return s.real() < 0.0 ? -s : s;
    };

    FixedPointResult out;
    if (material.impedance_prefactor == 0.0 || geometry.g_geom == 0.0) {
        out.f_ghz = Complex(f0, 0.0);
        out.iterations = 1;
        return out;
    }

    std::vector<double> history;
    Complex f = admissible(seed);
    bool above = f.real() > 0.5 * gap;
    int straddles = 0;
    int since_restart = 0;
    Complex prev_f{};
    Complex prev_g{};
    bool have_prev = false;
    bool secant = false;

    for (int it = 1; it <= options.max_iter; ++it) {
        const Complex r = rhs(f);
        const double res = residual(f, r);
        history.push_back(res);
        if (res <= options.tol) {
            out.f_ghz = f;
            out.iterations = it;
            out.residual = res;
            return out;
        }
        const Complex target = principal(r);
        const Complex gval = f - target;
        Complex next;
        if (!secant && since_restart >= 40) {
            const std::size_t n = history.size();
            if (history[n - 1] > 0.5 * history[n - 11]) secant = true;
        }
        if (secant && have_prev && gval != prev_g) {
            next = f - gval * (f - prev_f) / (gval - prev_g);
        } else {
            next = (1.0 - options.relaxation) * f + options.relaxation * target;
        }
        prev_f = f;
        prev_g = gval;
        have_prev = true;
        next = admissible(next);
        const bool next_above = next.real() > 0.5 * gap;
        ++since_restart;
        if (next_above != above) {
            out.gap_straddle = true;
            above = next_above;
            have_prev = false;
            secant = false;
            since_restart = 0;
            if (++straddles > 8) break;
        }
        f = next;
    }
    throw NoConvergence("fixed_point_eigenfrequency: no convergence", std::move(history));
}

Mode mode_shape(int n, double k, const ResonatorGeometry& g) {
    Mode m;
    m.n = n;
    m.k = k;
    double weight = 0.0;
    shoot(k, g, [&](double x0, double x1, const Shot& s) {
        m.segments.push_back({x0, x1, s.psi, s.p});
        weight += g.c * segment_square_integral(s.psi, s.p, k, x1 - x0);
    });
    // Shunt capacitances: the amplitude at x_j is the start value of the following segment.
    for (std::size_t j = 0; j < g.qubits.size(); ++j) {
        const double v = m.segments[j + 1].a;
        weight += g.qubits[j].C_s * v * v;
    }
    weight *= g.ell_m;
    m.norm = 1.0 / std::sqrt(weight);
    for (auto& s : m.segments) {
        s.a *= m.norm;
        s.b *= m.norm;
    }
    m.omega = ComplexFreq{unloaded_frequency_ghz(k, g), 0.0};
    return m;
}

Mode zero_mode(const ResonatorGeometry& g) {
    double cap = g.c * g.length;
    for (const auto& q : g.qubits) cap += q.C_s;
    Mode m;
    m.n = 0;
    m.k = 0.0;
    m.norm = 1.0 / std::sqrt(g.ell_m * cap);
    m.segments.push_back({0.0, g.length, m.norm, 0.0});
    return m;
}

std::vector<Mode> solve_modes(const ResonatorGeometry& geometry, const Material& material,
                              int n_max, const FixedPointOptions& options) {
    const std::vector<double> roots = secular_roots(geometry, n_max);
    std::vector<Mode> modes;
    modes.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        Mode m = mode_shape(static_cast<int>(i) + 1, roots[i], geometry);
        const FixedPointResult fp =
            fixed_point_eigenfrequency(roots[i], material, geometry, options);
        m.omega = ComplexFreq{fp.f_ghz.real(), fp.f_ghz.imag()};
        modes.push_back(std::move(m));
    }
    return modes;
}

bool below_gap(const Mode& mode, const Material& material) {
    return 2.0 * mode.omega.nu / material.gap_frequency_ghz < 2.0;
}

double mode_function(const Mode& mode, double x) {
    for (const auto& s : mode.segments) {
        if (x >= s.x0 && x <= s.x1 && (s.x1 > s.x0 || x == s.x0)) {
            const double t = mode.k * (x - s.x0);
            return s.a * std::cos(t) + s.b * std::sin(t);
        }
    }
    throw DomainError("mode_function: x outside [0, L]");
}

double mode_derivative(const Mode& mode, double x, bool right_side) {
    const ModeSegment* hit = nullptr;
    for (const auto& s : mode.segments) {
        if (s.x1 <= s.x0) continue;
        if (x >= s.x0 && x <= s.x1) {
            hit = &s;
            if (!right_side || x < s.x1) break;
        }
    }
    if (!hit) throw DomainError("mode_derivative: x outside [0, L]");
    const double t = mode.k * (x - hit->x0);
    return mode.k * (-hit->a * std::sin(t) + hit->b * std::cos(t));
}

Complex greens_function(double x, double x_prime, Complex f_ghz, const std::vector<Mode>& modes,
                        const Material& material, const ResonatorGeometry& geometry) {
    const Complex omega = angular(f_ghz);
    const Complex w2 = omega * omega * eps_at(material, geometry, f_ghz);
    if (std::abs(w2) == 0.0) throw PoleProximity("greens_function: zero frequency");
    const Mode z = zero_mode(geometry);
    Complex sum = mode_function(z, x) * mode_function(z, x_prime) / w2;
    for (const auto& m : modes) {
        const double w02 = omega0_squared(m, geometry);
        const Complex d = w2 - w02;
        if (std::abs(d) <= 1e-9 * w02)
            throw PoleProximity("greens_function: probe frequency on a mode pole");
        sum += mode_function(m, x) * mode_function(m, x_prime) / d;
    }
    return sum;
}

Complex greens_function_exact(double x, double x_prime, Complex f_ghz, const Material& material,
                              const ResonatorGeometry& g) {
    const Complex omega = angular(f_ghz);
    const Complex w2e = omega * omega * eps_at(material, g, f_ghz);
    const Complex q = std::sqrt(w2e * g.ell_m * g.c);
    auto rot = [&](Complex& u, Complex& du, double d) {
        const Complex cs = std::cos(q * d);
        const Complex sn_q = (q == 0.0) ? Complex(d) : std::sin(q * d) / q;
        const Complex nu = u * cs + du * sn_q;
        du = -u * q * q * sn_q + du * cs;
        u = nu;
    };
    // Left solution at y from below, right solution at y from below.
    auto left_state = [&](double y, Complex& u, Complex& du) {
        u = 1.0;
        du = 0.0;
        double pos = 0.0;
        for (const auto& qb : g.qubits) {
            if (qb.x >= y) break;
            rot(u, du, qb.x - pos);
            du -= w2e * g.ell_m * qb.C_s * u;
            pos = qb.x;
        }
        rot(u, du, y - pos);
    };
    auto right_state = [&](double y, Complex& u, Complex& du) {
        u = 1.0;
        du = 0.0;
        double pos = g.length;
        for (auto it = g.qubits.rbegin(); it != g.qubits.rend(); ++it) {
            if (it->x <= y) break;
            rot(u, du, it->x - pos);
            du += w2e * g.ell_m * it->C_s * u;
            pos = it->x;
        }
        rot(u, du, y - pos);
        for (const auto& qb : g.qubits)
            if (qb.x == y) du += w2e * g.ell_m * qb.C_s * u;
    };
    const double lo = std::min(x, x_prime), hi = std::max(x, x_prime);
    Complex ul, dul, ur, dur;
    left_state(lo, ul, dul);
    right_state(lo, ur, dur);
    const Complex wronskian = ul * dur - dul * ur;
    Complex uh, duh;
    right_state(hi, uh, duh);
    return ul * uh / wronskian;
}

double completeness_residual(const ResonatorGeometry& geometry, const std::vector<Mode>& modes,
                             const std::function<double(double)>& test_function) {
    const auto nodes = quadrature_nodes(geometry, std::max(64, 4 * static_cast<int>(modes.size())));
    std::vector<Mode> basis;
    basis.reserve(modes.size() + 1);
    basis.push_back(zero_mode(geometry));
    basis.insert(basis.end(), modes.begin(), modes.end());

    std::vector<double> fv(nodes.size());
    double fnorm = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        fv[i] = test_function(nodes[i].x);
        fnorm += nodes[i].w * fv[i] * fv[i];
    }
    std::vector<double> recon(nodes.size(), 0.0);
    for (const auto& m : basis) {
        double coeff = 0.0;
        std::vector<double> values(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            values[i] = mode_function(m, nodes[i].x);
            coeff += nodes[i].w * geometry.c * values[i] * fv[i];
        }
        for (const auto& q : geometry.qubits)
            coeff += q.C_s * mode_function(m, q.x) * test_function(q.x);
        coeff *= geometry.ell_m;
        for (std::size_t i = 0; i < nodes.size(); ++i) recon[i] += coeff * values[i];
    }
    double rnorm = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = fv[i] - recon[i];
        rnorm += nodes[i].w * r * r;
    }
    return std::sqrt(rnorm / fnorm);
}

GreensIdentity greens_identity(double x1, double x, double f_ghz, const ResonatorGeometry& geometry,
                               const Material& material, const std::vector<Mode>& modes) {
    if (!(impedance::reduced(material, f_ghz) > 2.0 + mb::kGapGuard))
        throw DomainError("greens_identity: probe must lie above the gap");
    const Complex omega = angular(Complex(f_ghz, 0.0));
    const Complex w2 = omega * omega * eps_at(material, geometry, f_ghz);
    const double rs = impedance::surface_impedance_ghz(material, f_ghz).real();

    std::vector<Mode> basis;
    basis.push_back(zero_mode(geometry));
    basis.insert(basis.end(), modes.begin(), modes.end());
    // G(x, x') = sum_n c_n Psi_n(x'), c_n = Psi_n(x) / D_n
    std::vector<Complex> c_x(basis.size()), c_x1(basis.size());
    for (std::size_t n = 0; n < basis.size(); ++n) {
        const Complex d = w2 - omega0_squared(basis[n], geometry);
        c_x[n] = mode_function(basis[n], x) / d;
        c_x1[n] = mode_function(basis[n], x1) / d;
    }
    auto g_pair = [&](double xp, Complex& gx, Complex& gx1) {
        gx = 0.0;
        gx1 = 0.0;
        for (std::size_t n = 0; n < basis.size(); ++n) {
            const double v = mode_function(basis[n], xp);
            gx += c_x[n] * v;
            gx1 += c_x1[n] * v;
        }
    };
    const auto nodes = quadrature_nodes(geometry, std::max(64, 4 * static_cast<int>(modes.size())));
    Complex integral = 0.0;
    for (const auto& nd : nodes) {
        Complex gx, gx1;
        g_pair(nd.x, gx, gx1);
        integral += nd.w * geometry.c * std::conj(gx1) * gx;
    }
    for (const auto& q : geometry.qubits) {
        Complex gx, gx1;
        g_pair(q.x, gx, gx1);
        integral += q.C_s * std::conj(gx1) * gx;
    }
    GreensIdentity out;
    out.lhs = geometry.g_geom * omega.real() * rs * integral;
    const Complex g_x1_x = greens_function_exact(x1, x, f_ghz, material, geometry);
    const Complex g_x_x1 = greens_function_exact(x, x1, f_ghz, material, geometry);
    out.rhs = Complex(0.0, 0.5) * (std::conj(g_x1_x) - g_x_x1);
    out.residual = out.rhs == 0.0 ? std::abs(out.lhs) : std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

double greens_identity_residual(double x1, double x, double f_ghz,
                                const ResonatorGeometry& geometry, const Material& material,
                                const std::vector<Mode>& modes) {
    return greens_identity(x1, x, f_ghz, geometry, material, modes).residual;
}

}  // namespace dcqed
