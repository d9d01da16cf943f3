#include "dcqed/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dcqed/errors.hpp"

namespace dcqed::cli {
namespace {

using nlohmann::json;

std::string status_of(const std::exception& e) {
    std::string kind = "Error";
    if (dynamic_cast<const GridTooCoarse*>(&e)) kind = "GridTooCoarse";
    else if (dynamic_cast<const NonConvergence*>(&e)) kind = "NonConvergence";
    else if (dynamic_cast<const NoConvergence*>(&e)) kind = "NoConvergence";
    else if (dynamic_cast<const GapSingularity*>(&e)) kind = "GapSingularity";
    else if (dynamic_cast<const BranchCut*>(&e)) kind = "BranchCut";
    else if (dynamic_cast<const SingularInterior*>(&e)) kind = "SingularInterior";
    else if (dynamic_cast<const BracketingFailure*>(&e)) kind = "BracketingFailure";
    else if (dynamic_cast<const QubitOnResonance*>(&e)) kind = "QubitOnResonance";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "DomainError";
    return kind + ": " + e.what();
}

// Runs one row; library errors become a status cell, configuration errors propagate.
template <typename F>
void guarded_row(Table& table, CommandResult& result, std::vector<Cell> prefix, F&& body) {
    const std::size_t width = table.columns.size();
    try {
        std::vector<Cell> row = std::move(prefix);
        body(row);
        row.emplace_back(std::string("ok"));
        table.rows.push_back(std::move(row));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        result.numerical_failure = true;
        std::vector<Cell> row;
        row.reserve(width);
        for (std::size_t i = 0; i + 1 < width; ++i) row.emplace_back(std::string("NA"));
        row.emplace_back(status_of(e));
        table.rows.push_back(std::move(row));
    }
}

std::vector<double> range_or_config(const std::string& flag, const std::string& from_config,
                                    const std::string& what) {
    const std::string& text = flag.empty() ? from_config : flag;
    if (text.empty()) throw ConfigError(what + ": range required");
    auto values = parse_range(text);
    if (values.empty()) throw ConfigError(what + ": empty range");
    return values;
}

}  // namespace

CommandResult cmd_conductivity(const RunConfig& config, const CommandArgs& args) {
    const auto nus = range_or_config(args.nu, config.sweep.nu, "nu");
    const auto kappas = range_or_config(args.kappa, config.sweep.kappa, "kappa");
    for (double nu : nus)
        if (!(nu > 0.0)) throw ConfigError("nu: values must be positive");
    for (double kappa : kappas)
        if (kappa < 0.0) throw ConfigError("kappa: values must be non-negative");

    CommandResult result;
    Table t;
    t.columns = {"nu", "kappa", "sigma1", "sigma2"};
    if (args.oracle)
        for (const char* c : {"oracle_sigma1", "oracle_sigma2", "rel_err"}) t.columns.push_back(c);
    t.columns.push_back("status");
    const double eps_gap = config.solver.epsilon_gap;
    for (double nu : nus) {
        for (double kappa : kappas) {
            guarded_row(t, result, {nu, kappa}, [&](std::vector<Cell>& row) {
                const Complex s = (kappa == 0.0 && nu <= 2.0)
                                      ? mb::sigma_real_axis(nu)
                                      : mb::sigma_tilde({nu, kappa}, eps_gap);
                row.emplace_back(s.real());
                row.emplace_back(-s.imag());
                if (args.oracle) {
                    const Complex o = mb::sigma_oracle({nu, kappa});
                    row.emplace_back(o.real());
                    row.emplace_back(-o.imag());
                    row.emplace_back(std::abs(s - o) / std::abs(o));
                }
            });
        }
    }
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cmd_impedance(const RunConfig& config, const CommandArgs& args) {
    const Material& material = config.require_material();
    const auto freqs = range_or_config(args.freq_ghz, config.sweep.freq_ghz, "freq_ghz");
    for (double f : freqs)
        if (!(f > 0.0)) throw ConfigError("freq_ghz: values must be positive");

    CommandResult result;
    Table t;
    t.columns = {"f_ghz", "nu", "R_s", "X_s"};
    if (config.geometry) {
        t.columns.push_back("eps_re");
        t.columns.push_back("eps_im");
    }
    t.columns.push_back("status");
    for (double f : freqs) {
        guarded_row(t, result, {f, impedance::reduced(material, f)}, [&](std::vector<Cell>& row) {
            const Complex z = impedance::surface_impedance_ghz(material, Complex(f, 0.0));
            row.emplace_back(z.real());
            row.emplace_back(z.imag());
            if (config.geometry) {
                const auto eps = impedance::epsilon(material, config.geometry->g_geom,
                                                    config.geometry->ell_m, f);
                row.emplace_back(eps.value.real());
                row.emplace_back(eps.value.imag());
            }
        });
    }
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cmd_modes(const RunConfig& config, const CommandArgs&) {
    const Material& material = config.require_material();
    const ResonatorGeometry& geometry = config.require_geometry();
    const auto options = config.fixed_point_options();

    CommandResult result;
    Table t;
    t.columns = {"n",           "k_n",       "nu_n_GHz",  "kappa_n_GHz",   "unloaded_GHz",
                 "red_shift",   "g_n_or_NA", "below_gap_flag", "status"};
    const auto roots = secular_roots(geometry, config.solver.N_max);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const long long n = static_cast<long long>(i) + 1;
        guarded_row(t, result, {n, roots[i]}, [&](std::vector<Cell>& row) {
            Mode m = mode_shape(static_cast<int>(n), roots[i], geometry);
            const auto fp = fixed_point_eigenfrequency(roots[i], material, geometry, options);
            m.omega = ComplexFreq{fp.f_ghz.real(), fp.f_ghz.imag()};
            const double f0 = unloaded_frequency_ghz(roots[i], geometry);
            row.emplace_back(m.omega.nu);
            row.emplace_back(m.omega.kappa);
            row.emplace_back(f0);
            row.emplace_back(1.0 - m.omega.nu / f0);
            const bool inside = below_gap(m, material);
            if (inside && config.qubit)
                row.emplace_back(coupling_strength(m, *config.qubit, material, geometry).real());
            else
                row.emplace_back(std::string("NA"));
            row.emplace_back(static_cast<long long>(inside ? 1 : 0));
        });
    }
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cmd_spectral_density(const RunConfig& config, const CommandArgs& args) {
    const Material& material = config.require_material();
    const ResonatorGeometry& geometry = config.require_geometry();
    const QubitParams& qubit = config.require_qubit();
    const auto freqs = range_or_config(args.freq_ghz, config.sweep.freq_ghz, "freq_ghz");
    for (double f : freqs)
        if (!(f > material.gap_frequency_ghz))
            throw ConfigError("freq_ghz: spectral density is defined above the gap only");

    CommandResult result;
    Table t;
    t.columns = {"f_ghz", "J", "status"};
    std::vector<Mode> modes;
    try {
        modes = solve_modes(geometry, material, config.solver.N_max, config.fixed_point_options());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        result.numerical_failure = true;
        t.rows.push_back({std::string("NA"), std::string("NA"), status_of(e)});
        result.tables.push_back(std::move(t));
        return result;
    }
    for (double f : freqs)
        guarded_row(t, result, {f}, [&](std::vector<Cell>& row) {
            row.emplace_back(spectral_density(f, qubit, modes, material, geometry));
        });
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cmd_lamb_shift(const RunConfig& config, const CommandArgs& args) {
    const Material& material = config.require_material();
    const ResonatorGeometry& geometry = config.require_geometry();
    const QubitParams& qubit = config.require_qubit();
    const std::string& model = args.model;
    if (model != "all" && model != "dispersion" && model != "below_bandgap" &&
        model != "no_dispersion")
        throw ConfigError("model: expected all, dispersion, below_bandgap or no_dispersion");

    CommandResult result;
    Table totals;
    totals.name = "totals";
    totals.columns = {"dispersion_mhz",          "below_bandgap_mhz",
                      "no_dispersion_mhz",       "convergence_index_70pct",
                      "no_dispersion_index_70pct", "truncation_monotone",
                      "impedance_prefactor",     "status"};
    LambShiftReport report;
    try {
        report = lamb_shift_report(qubit, material, geometry, config.solver.N_max,
                                   config.fixed_point_options());
        if (config.target_no_dispersion_mhz)
            report = rescale_to_target(report, *config.target_no_dispersion_mhz);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        result.numerical_failure = true;
        std::vector<Cell> row(totals.columns.size() - 1, std::string("NA"));
        row.emplace_back(status_of(e));
        totals.rows.push_back(std::move(row));
        result.tables.push_back(std::move(totals));
        return result;
    }

    Table terms;
    terms.columns = {"n", "re_term", "im_term", "no_dispersion_term", "below_bandgap_term"};
    for (std::size_t i = 0; i < report.per_mode_terms.size(); ++i)
        terms.rows.push_back({static_cast<long long>(i) + 1, report.per_mode_terms[i].real(),
                              report.per_mode_terms[i].imag(), report.no_dispersion_terms[i],
                              report.below_bandgap_terms[i]});

    Table curve;
    curve.name = "convergence";
    curve.columns = {"M"};
    std::vector<const std::vector<double>*> series;
    if (model == "all" || model == "dispersion") {
        curve.columns.push_back("dispersion");
        series.push_back(&report.normalized_curve);
    }
    if (model == "all" || model == "below_bandgap") {
        curve.columns.push_back("below_bandgap");
        series.push_back(&report.below_bandgap_curve);
    }
    if (model == "all" || model == "no_dispersion") {
        curve.columns.push_back("no_dispersion");
        series.push_back(&report.no_dispersion_curve);
    }
    for (std::size_t i = 0; i < report.normalized_curve.size(); ++i) {
        std::vector<Cell> row{static_cast<long long>(i) + 1};
        for (const auto* s : series) row.emplace_back((*s)[i]);
        curve.rows.push_back(std::move(row));
    }

    totals.rows.push_back({report.totals.dispersion, report.totals.below_bandgap,
                           report.totals.no_dispersion,
                           static_cast<long long>(report.convergence_index_70pct),
                           static_cast<long long>(report.no_dispersion_index_70pct),
                           static_cast<long long>(report.truncation_monotone ? 1 : 0),
                           material.impedance_prefactor, std::string("ok")});
    result.tables.push_back(std::move(terms));
    result.tables.push_back(std::move(curve));
    result.tables.push_back(std::move(totals));
    return result;
}

CommandResult cmd_kk_check(const RunConfig& config, const CommandArgs& args) {
    const Material& material = config.require_material();
    const auto& probes = args.probes_ghz.empty() ? config.sweep.probes_ghz : args.probes_ghz;
    if (probes.empty()) throw ConfigError("probes: at least one probe frequency required");
    impedance::KKGrid grid;
    grid.cells = config.kk.cells;
    grid.excision_cells = config.kk.excision_cells;
    grid.tail_correction = config.kk.tail_correction;
    if (config.kk.omega_max_ghz > 0.0)
        grid.nu_max = impedance::reduced(material, config.kk.omega_max_ghz);
    for (double p : probes)
        if (!(p > 0.0) || !(impedance::reduced(material, p) < grid.nu_max))
            throw ConfigError("probes: each probe must lie inside the grid");

    CommandResult result;
    Table t;
    t.columns = {"probe_freq", "probe_nu", "lhs", "rhs", "residual", "status"};
    for (double p : probes)
        guarded_row(t, result, {p, impedance::reduced(material, p)}, [&](std::vector<Cell>& row) {
            const auto r = impedance::kk_check(material, impedance::reduced(material, p), grid);
            row.emplace_back(r.lhs);
            row.emplace_back(r.rhs);
            row.emplace_back(r.residual);
        });
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult run_command(const std::string& name, const RunConfig& config, const CommandArgs& args) {
    if (name == "conductivity") return cmd_conductivity(config, args);
    if (name == "impedance") return cmd_impedance(config, args);
    if (name == "modes") return cmd_modes(config, args);
    if (name == "spectral-density") return cmd_spectral_density(config, args);
    if (name == "lamb-shift") return cmd_lamb_shift(config, args);
    if (name == "kk-check") return cmd_kk_check(config, args);
    throw ConfigError("unknown command '" + name + "'");
}

std::string format_csv(const Table& table, int precision, const std::vector<std::string>& notes) {
    std::string out;
    for (const auto& n : notes) out += "# default: " + n + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += "\n";
    char buf[64];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            if (const double* d = std::get_if<double>(&row[i])) {
                std::snprintf(buf, sizeof buf, "%.*e", precision, *d + 0.0);
                out += buf;
            } else if (const long long* v = std::get_if<long long>(&row[i])) {
                out += std::to_string(*v);
            } else {
                std::string s = std::get<std::string>(row[i]);
                if (s.find_first_of(",\"\n") != std::string::npos) {
                    std::string q = "\"";
                    for (char c : s) {
                        if (c == '"') q += '"';
                        q += (c == '\n') ? ' ' : c;
                    }
                    s = q + "\"";
                }
                out += s;
            }
        }
        out += "\n";
    }
    return out;
}

json format_json(const std::string& command, const RunConfig& config, const CommandResult& result) {
    json tables = json::object();
    for (const auto& t : result.tables) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json r = json::array();
            for (const auto& c : row) {
                if (const double* d = std::get_if<double>(&c))
                    r.push_back(std::isfinite(*d) ? json(*d) : json(nullptr));
                else if (const long long* v = std::get_if<long long>(&c))
                    r.push_back(*v);
                else
                    r.push_back(std::get<std::string>(c));
            }
            rows.push_back(std::move(r));
        }
        tables[t.name.empty() ? "main" : t.name] = {{"columns", t.columns}, {"rows", rows}};
    }
    return {{"command", command},
            {"status", result.numerical_failure ? "numerical_failure" : "ok"},
            {"defaults", config.defaults_used},
            {"config", to_json(config)},
            {"tables", tables}};
}

void write_outputs(const std::string& command, const RunConfig& config, const CommandResult& result,
                   const std::string& path) {
    auto emit = [](const std::string& file, const std::string& text) {
        if (file.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(file, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file '" + file + "'");
        out << text;
    };
    if (config.output.format == "json") {
        emit(path, format_json(command, config, result).dump(2) + "\n");
        return;
    }
    namespace fs = std::filesystem;
    for (std::size_t i = 0; i < result.tables.size(); ++i) {
        const Table& t = result.tables[i];
        const std::string text = format_csv(t, config.output.precision, config.defaults_used);
        if (path.empty()) {
            if (i) std::cout << "\n";
            emit("", text);
        } else if (t.name.empty()) {
            emit(path, text);
        } else {
            const fs::path p(path);
            const fs::path side =
                p.parent_path() / (p.stem().string() + "_" + t.name + p.extension().string());
            emit(side.string(), text);
        }
    }
}

}  // namespace dcqed::cli
