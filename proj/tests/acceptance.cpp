// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Usage: acceptance [--expect-fail 3,10]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dcqed/config.hpp"
#include "dcqed/errors.hpp"
#include "oracles.hpp"

using namespace dcqed;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

ResonatorGeometry table_geometry(double g_geom = 3e6, double x_q = 0.0, double ratio = 5e-3) {
    ResonatorGeometry g = reconstruct_geometry(5.93, g_geom);
    g.qubits.push_back({x_q, ratio * g.c * g.length, 1.0});
    return g;
}

constexpr double kTableA = 0.002318636904111329;

Outcome criterion1(double& budget) {
    budget = 10.0;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    double worst = 0.0;
    while (tested < 200) {
        const Complex k(0.95 * u(rng), 0.95 * u(rng));
        const Complex z(1.5 * u(rng), 1.5 * u(rng));
        if (std::abs(k) > 0.95 || std::abs(z) < 1e-3) continue;
        bool clear = true;
        for (Complex b : {Complex(1.0), Complex(-1.0), 1.0 / k, -1.0 / k}) {
            const double t = std::clamp((std::conj(z) * b).real() / std::norm(z), 0.0, 1.0);
            if (std::abs(b - t * z) < 0.05) clear = false;
        }
        if (!clear) continue;
        worst = std::max(worst, rel(elliptic::ellip_incomplete_f(z, k), elliptic::ellip_incomplete_f_quadrature(z, k)));
        worst = std::max(worst, rel(elliptic::ellip_incomplete_e(z, k), elliptic::ellip_incomplete_e_quadrature(z, k)));
        // complete integrals by quadrature of the Legendre integrands with x = sin(theta)
        const auto kq = elliptic::contour_quadrature(
            [k](Complex t) { return 1.0 / psqrt(1.0 - k * k * std::sin(t) * std::sin(t)); },
            {0.0, std::numbers::pi / 2, 1e-13});
        const auto eq = elliptic::contour_quadrature(
            [k](Complex t) { return psqrt(1.0 - k * k * std::sin(t) * std::sin(t)); },
            {0.0, std::numbers::pi / 2, 1e-13});
        worst = std::max(worst, rel(elliptic::ellip_complete_k(k), kq.value));
        worst = std::max(worst, rel(elliptic::ellip_complete_e(k), eq.value));
        ++tested;
    }
    return {worst <= 1e-9, "200 points, max rel err " + fmt("%.2e", worst)};
}

Outcome criterion2(double& budget) {
    budget = 60.0;
    double worst = 0.0;
    for (double nu : {2.1, 2.5, 3.0, 4.0, 6.0, 10.0, 20.0})
        for (double kappa : {0.0, 0.01, 0.1, 0.5})
            worst = std::max(worst, rel(mb::sigma_tilde({nu, kappa}), mb::sigma_oracle({nu, kappa})));
    return {worst <= 1e-6, "7x4 grid, max rel err " + fmt("%.2e", worst)};
}

Outcome criterion3(double& budget) {
    budget = 0.0;
    bool ok = true;
    std::string detail;
    for (double nu : {2.5, 4.0, 10.0}) {
        const Complex axis = mb::sigma_real_axis(nu);
        const double r = std::abs(mb::sigma_tilde({nu, 1e-8}) - axis) / std::abs(axis);
        ok = ok && r <= 1e-4;
        detail += "nu=" + fmt("%g", nu) + " " + fmt("%.2e", r) + "; ";
    }
    const double s1 = mb::sigma_real_axis(100.0).real();
    ok = ok && std::abs(s1 - 1.0) <= 0.02;
    detail += "sigma1(100)=" + fmt("%.5f", s1);
    return {ok, detail};
}

Outcome criterion4(double& budget) {
    budget = 0.0;
    bool ok = true;
    double worst = 0.0, worst_ratio = 0.0;
    for (const Material& m : {aluminum(1.0), niobium(1.0)}) {
        for (double probe : {1.0, 4.0}) {
            const double r1 = impedance::kk_residual(m, probe);
            const double r2 = impedance::kk_residual(m, probe, {200.0, 4000, 1.0, true});
            worst = std::max(worst, r1);
            worst_ratio = std::max(worst_ratio, r2 / r1);
            ok = ok && r1 <= 0.02 && r2 <= 0.5 * r1;
        }
    }
    return {ok, "max residual " + fmt("%.2e", worst) + ", worst doubling ratio " + fmt("%.3f", worst_ratio)};
}

Outcome criterion5(double& budget) {
    budget = 0.0;
    bool ok = true;
    auto bare = reconstruct_geometry(5.93, 3e6);
    const auto roots = secular_roots(bare, 2500);
    double worst = 0.0;
    for (int n = 1; n <= 2500; ++n)
        worst = std::max(worst, std::abs(roots[n - 1] - n * std::numbers::pi / bare.length));
    ok = ok && worst <= 1e-12 * std::numbers::pi / bare.length;

    const auto g = table_geometry();
    int worst_iter = 0;
    for (double k : secular_roots(g, 100)) {
        const auto r = fixed_point_eigenfrequency(k, aluminum(0.0), g);
        worst_iter = std::max(worst_iter, r.iterations);
        ok = ok && r.iterations == 1 &&
             r.f_ghz.real() == k / (2.0 * std::numbers::pi * std::sqrt(g.ell_m * g.c)) / 1e9;
    }

    int loadings = 0;
    for (double x_q : {0.0, 0.0013, 0.005, 0.0077, 0.01})
        for (double ratio : {1e-4, 5e-3, 0.05, 0.5}) {
            const auto lg = table_geometry(3e6, x_q, ratio);
            const auto r = secular_roots(lg, 500);
            for (int n = 1; n <= 500; ++n)
                ok = ok && r[n - 1] > (n - 1) * std::numbers::pi / lg.length &&
                     r[n - 1] <= n * std::numbers::pi / lg.length * (1.0 + 1e-15);
            ++loadings;
        }
    return {ok, "bare root err " + fmt("%.2e", worst * bare.length / std::numbers::pi) +
                    " pi/L, max iterations " + std::to_string(worst_iter) + ", " + std::to_string(loadings) +
                    " loadings interlaced"};
}

Outcome criterion6(double& budget) {
    budget = 30.0;
    double worst = 0.0;
    for (double x_q : {0.0, 0.004}) {
        const auto g = table_geometry(3e6, x_q, 0.02);
        const auto roots = secular_roots(g, 10);
        const auto fd = oracle::fd_eigenfrequencies_ghz(g, 10001, 10);
        for (int n = 0; n < 10; ++n)
            worst = std::max(worst, std::abs(fd[n] / unloaded_frequency_ghz(roots[n], g) - 1.0));
    }
    return {worst <= 1e-4, "first 10 modes, max rel err " + fmt("%.2e", worst)};
}

Outcome criterion7(double& budget) {
    budget = 0.0;
    bool ok = true;
    int below = 0, above = 0;
    double worst_ratio = 0.0;
    for (const Material& m : {aluminum(kTableA), niobium(0.01)}) {
        const auto g = table_geometry();
        const auto modes = solve_modes(g, m, 2500);
        for (const auto& mode : modes) {
            if (below_gap(mode, m)) {
                ++below;
                worst_ratio = std::max(worst_ratio, mode.omega.kappa / mode.omega.nu);
                ok = ok && mode.omega.kappa / mode.omega.nu <= 1e-10 &&
                     mode.omega.nu < unloaded_frequency_ghz(mode.k, g);
            } else {
                ++above;
                ok = ok && mode.omega.kappa > 0.0;
            }
        }
    }
    return {ok, std::to_string(below) + " below-gap modes (max kappa/nu " + fmt("%.1e", worst_ratio) + "), " +
                    std::to_string(above) + " above-gap modes"};
}

Outcome criterion8(double& budget) {
    budget = 0.0;
    bool ok = true;
    const auto g = table_geometry();
    const Material al = aluminum(kTableA);
    const auto modes = solve_modes(g, al, 500);
    std::string detail = "identity";
    double prev = INFINITY;
    for (int n : {125, 250, 500}) {
        std::vector<Mode> sub(modes.begin(), modes.begin() + n);
        const double r = greens_identity_residual(0.003, 0.007, 120.0, g, al, sub);
        ok = ok && r < prev;
        prev = r;
        detail += " " + fmt("%.1e", r);
    }
    ok = ok && prev <= 1e-2;
    detail += "; completeness";
    prev = INFINITY;
    auto bump = [](double x) { return std::exp(-std::pow((x - 0.004) / 0.001, 2)); };
    for (int n : {50, 100, 200, 400}) {
        std::vector<Mode> sub(modes.begin(), modes.begin() + n);
        const double r = completeness_residual(g, sub, bump);
        ok = ok && r < prev;
        prev = r;
        detail += " " + fmt("%.1e", r);
    }
    return {ok, detail};
}

Outcome criterion9(double& budget) {
    budget = 0.0;
    const auto g = table_geometry();
    const QubitParams q;
    const auto pec = lamb_shift_report(q, aluminum(0.0), g, 2500);
    const double total_err = std::abs(pec.totals.dispersion / pec.totals.no_dispersion - 1.0);

    auto modes = solve_modes(g, aluminum(0.0), 2500);
    double term_err = 0.0;
    for (auto& m : modes) {
        m.omega.kappa = 1e-8;
        term_err = std::max(term_err, std::abs(lamb_shift_term(m, q, aluminum(0.0), g).real() /
                                                   cc_comparator_term(m, q, g) - 1.0));
    }

    const QubitParams weak{5.0, 0.0, 0.01};
    std::vector<double> freqs, couplings;
    double predicted = 0.0;
    for (int n = 0; n < 3; ++n) {
        const Mode m = [&] {
            Mode x = modes[n];
            x.omega.kappa = 0.0;
            return x;
        }();
        freqs.push_back(m.omega.nu);
        couplings.push_back(coupling_strength(m, weak, aluminum(0.0), g).real());
        predicted += lamb_shift_term(m, weak, aluminum(0.0), g).real();
    }
    const double exact = oracle::matrix_transition_shift(weak.Omega_q, freqs, couplings);
    const double matrix_err = std::abs(exact / predicted - 1.0);
    const bool ok = total_err <= 1e-9 && term_err <= 1e-4 && matrix_err <= 0.01;
    return {ok, "Z_s=0 total " + fmt("%.1e", total_err) + ", kappa=1e-8 terms " + fmt("%.1e", term_err) +
                    ", 3-mode matrix " + fmt("%.1e", matrix_err)};
}

Outcome criterion10(double& budget) {
    budget = 600.0;
    const std::filesystem::path dir = DCQED_CONFIG_DIR;
    const char* names[] = {"table1_s0p6um.json", "table1_s1p2um.json", "table1_s2p4um.json",
                           "table1_s5um.json",   "table1_s10um.json",  "table1_s20um.json"};
    std::vector<LambShiftReport> reports;
    for (const char* name : names) {
        RunConfig cfg = load_config((dir / name).string());
        resolve(cfg);
        reports.push_back(lamb_shift_report(cfg.require_qubit(), cfg.require_material(),
                                            cfg.require_geometry(), cfg.solver.N_max,
                                            cfg.fixed_point_options()));
    }
    bool ordering = true, collapse = true, crossing = true, decreasing = true;
    double spread = 0.0;
    std::string rows;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& t = reports[i].totals;
        ordering = ordering && std::abs(t.below_bandgap) <= std::abs(t.dispersion) &&
                   std::abs(t.dispersion) <= std::abs(t.no_dispersion);
        for (std::size_t j = 0; j < reports[i].no_dispersion_curve.size(); ++j)
            spread = std::max(spread, std::abs(reports[i].no_dispersion_curve[j] - reports[0].no_dispersion_curve[j]));
        if (i > 0) {
            // rows run from small to large s
            decreasing = decreasing && std::abs(t.dispersion) < std::abs(reports[i - 1].totals.dispersion);
            crossing = crossing && reports[i - 1].convergence_index_70pct <= reports[i].convergence_index_70pct;
        }
        rows += fmt(" %.1f", t.dispersion);
    }
    collapse = spread <= 1e-3;
    std::string detail = std::string("ordering ") + (ordering ? "ok" : "violated") + ", collapse " +
                         fmt("%.1e", spread) + ", crossing index " + (crossing ? "ok" : "violated") +
                         ", |disp| decreasing " + (decreasing ? "ok" : "violated") + "; disp MHz" + rows;
    return {ordering && collapse && crossing && decreasing, detail};
}

std::set<int> parse_list(const std::string& text) {
    std::set<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
            expected = parse_list(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--expect-fail N,M,...]\n");
            return 2;
        }
    }

    const std::function<Outcome(double&)> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10};
    int unexpected = 0;
    for (int i = 0; i < 10; ++i) {
        const int id = i + 1;
        double budget = 0.0;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i](budget);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget > 0.0 && secs > budget) {
            o.pass = false;
            o.detail += "; runtime over budget";
        }
        const bool known = expected.count(id) > 0;
        std::printf("criterion %d: %s (%s) [%.2f s]%s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                    known ? (o.pass ? " unexpected pass" : " known failure") : "");
        std::fflush(stdout);
        if (o.pass == known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
