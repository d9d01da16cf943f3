#include "dcqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dcqed/errors.hpp"

namespace dcqed {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& section, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError(section + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& section, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(section + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(section + "." + key + ": must be finite");
    return x;
}

double number_or(const json& j, const std::string& section, const std::string& key, double fallback) {
    return j.contains(key) ? number(j, section, key) : fallback;
}

int integer_or(const json& j, const std::string& section, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(section + "." + key + ": expected an integer");
    return j.at(key).get<int>();
}

std::string string_or(const json& j, const std::string& section, const std::string& key,
                      const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw ConfigError(section + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

Material parse_material(const json& j, RunConfig& cfg) {
    check_keys(j, "material",
               {"name", "gap_frequency_ghz", "limit_regime", "impedance_prefactor",
                "calibrate_red_shift"});
    Material m;
    m.name = string_or(j, "material", "name", "");
    std::optional<Material> preset;
    if (m.name == "Al") preset = aluminum(0.0);
    if (m.name == "Nb") preset = niobium(0.0);

    if (j.contains("gap_frequency_ghz")) {
        m.gap_frequency_ghz = number(j, "material", "gap_frequency_ghz");
    } else {
        require(preset.has_value(), "material.gap_frequency_ghz: required for material '" + m.name + "'");
        m.gap_frequency_ghz = preset->gap_frequency_ghz;
        m.gap_is_default = true;
        cfg.defaults_used.push_back("material.gap_frequency_ghz");
    }
    if (j.contains("limit_regime")) {
        m.regime = regime_from_string(string_or(j, "material", "limit_regime", ""));
    } else {
        require(preset.has_value(), "material.limit_regime: required for material '" + m.name + "'");
        m.regime = preset->regime;
        cfg.defaults_used.push_back("material.limit_regime");
    }
    require(m.gap_frequency_ghz > 0.0, "material.gap_frequency_ghz: must be positive");

    const bool has_a = j.contains("impedance_prefactor");
    const bool has_cal = j.contains("calibrate_red_shift");
    require(!(has_a && has_cal),
            "material: impedance_prefactor and calibrate_red_shift are mutually exclusive");
    if (has_a) {
        m.impedance_prefactor = number(j, "material", "impedance_prefactor");
        require(m.impedance_prefactor >= 0.0, "material.impedance_prefactor: must be non-negative");
    } else {
        const double shift = number_or(j, "material", "calibrate_red_shift", 0.02);
        if (!has_cal) cfg.defaults_used.push_back("material.calibrate_red_shift");
        require(shift > 0.0 && shift < 0.5, "material.calibrate_red_shift: must lie in (0, 0.5)");
        cfg.calibrate_red_shift = shift;
    }
    return m;
}

ResonatorGeometry parse_geometry(const json& j) {
    check_keys(j, "geometry", {"length", "ell_m", "c", "g_geom", "reconstruction", "qubits"});
    ResonatorGeometry g;
    if (j.contains("reconstruction")) {
        for (const char* key : {"length", "ell_m", "c", "g_geom"})
            require(!j.contains(key), std::string("geometry.") + key +
                                          ": not allowed together with geometry.reconstruction");
        const json& r = j.at("reconstruction");
        check_keys(r, "geometry.reconstruction", {"f0_ghz", "g_geom", "z0", "length"});
        const double f0 = number(r, "geometry.reconstruction", "f0_ghz");
        const double gg = number(r, "geometry.reconstruction", "g_geom");
        const double z0 = number_or(r, "geometry.reconstruction", "z0", 50.0);
        const double len = number_or(r, "geometry.reconstruction", "length", 0.01);
        require(f0 > 0.0 && z0 > 0.0 && len > 0.0 && gg >= 0.0,
                "geometry.reconstruction: f0_ghz, z0, length must be positive and g_geom non-negative");
        g = reconstruct_geometry(f0, gg, z0, len);
    } else {
        g.length = number(j, "geometry", "length");
        g.ell_m = number(j, "geometry", "ell_m");
        g.c = number(j, "geometry", "c");
        g.g_geom = number(j, "geometry", "g_geom");
    }
    if (j.contains("qubits")) {
        const json& list = j.at("qubits");
        require(list.is_array(), "geometry.qubits: expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string sec = "geometry.qubits[" + std::to_string(i) + "]";
            const json& q = list[i];
            check_keys(q, sec, {"x", "C_s", "C_s_over_cL", "gamma"});
            QubitLoad load;
            load.x = number(q, sec, "x");
            require(q.contains("C_s") != q.contains("C_s_over_cL"),
                    sec + ": exactly one of C_s and C_s_over_cL is required");
            load.C_s = q.contains("C_s") ? number(q, sec, "C_s")
                                         : number(q, sec, "C_s_over_cL") * g.c * g.length;
            load.gamma = number_or(q, sec, "gamma", 1.0);
            g.qubits.push_back(load);
        }
    }
    try {
        validate(g);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }
    return g;
}

}  // namespace

FixedPointOptions RunConfig::fixed_point_options() const {
    return FixedPointOptions{solver.tol, solver.max_iter, solver.relaxation, solver.epsilon_gap};
}

const Material& RunConfig::require_material() const {
    if (!material) throw ConfigError("material: section required for this command");
    return *material;
}

const ResonatorGeometry& RunConfig::require_geometry() const {
    if (!geometry) throw ConfigError("geometry: section required for this command");
    return *geometry;
}

const QubitParams& RunConfig::require_qubit() const {
    if (!qubit) throw ConfigError("qubit: section required for this command");
    return *qubit;
}

RunConfig parse_config(const json& doc) {
    check_keys(doc, "config",
               {"label", "material", "geometry", "qubit", "solver", "output", "kk", "sweep",
                "lamb_shift"});
    RunConfig cfg;
    cfg.label = string_or(doc, "config", "label", "");
    if (doc.contains("material")) cfg.material = parse_material(doc.at("material"), cfg);
    if (doc.contains("geometry")) cfg.geometry = parse_geometry(doc.at("geometry"));

    if (doc.contains("qubit")) {
        const json& q = doc.at("qubit");
        check_keys(q, "qubit", {"Omega_q", "x_q", "dipole_prefactor"});
        QubitParams p;
        if (!q.contains("Omega_q")) cfg.defaults_used.push_back("qubit.Omega_q");
        p.Omega_q = number_or(q, "qubit", "Omega_q", 5.0);
        double x_default = 0.0;
        if (cfg.geometry && !cfg.geometry->qubits.empty()) x_default = cfg.geometry->qubits[0].x;
        p.x_q = number_or(q, "qubit", "x_q", x_default);
        p.dipole_prefactor = number_or(q, "qubit", "dipole_prefactor", 1.0);
        require(p.Omega_q > 0.0, "qubit.Omega_q: must be positive");
        if (cfg.geometry)
            require(p.x_q >= 0.0 && p.x_q <= cfg.geometry->length,
                    "qubit.x_q: must lie inside the resonator");
        cfg.qubit = p;
    }

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        check_keys(s, "solver", {"tol", "max_iter", "relaxation", "N_max", "epsilon_gap"});
        cfg.solver.tol = number_or(s, "solver", "tol", cfg.solver.tol);
        cfg.solver.max_iter = integer_or(s, "solver", "max_iter", cfg.solver.max_iter);
        cfg.solver.relaxation = number_or(s, "solver", "relaxation", cfg.solver.relaxation);
        cfg.solver.N_max = integer_or(s, "solver", "N_max", cfg.solver.N_max);
        cfg.solver.epsilon_gap = number_or(s, "solver", "epsilon_gap", cfg.solver.epsilon_gap);
    }
    require(cfg.solver.tol > 0.0 && cfg.solver.tol < 1e-2, "solver.tol: must lie in (0, 1e-2)");
    require(cfg.solver.max_iter >= 1, "solver.max_iter: must be at least 1");
    require(cfg.solver.relaxation > 0.0 && cfg.solver.relaxation <= 1.0,
            "solver.relaxation: must lie in (0, 1]");
    require(cfg.solver.N_max >= 1, "solver.N_max: must be at least 1");
    require(cfg.solver.epsilon_gap > 0.0, "solver.epsilon_gap: must be positive");

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        check_keys(o, "output", {"format", "path", "precision"});
        cfg.output.format = string_or(o, "output", "format", cfg.output.format);
        cfg.output.path = string_or(o, "output", "path", "");
        cfg.output.precision = integer_or(o, "output", "precision", cfg.output.precision);
    }
    require(cfg.output.format == "csv" || cfg.output.format == "json",
            "output.format: expected csv or json");
    require(cfg.output.precision >= 1 && cfg.output.precision <= 17,
            "output.precision: must lie in [1, 17]");

    if (doc.contains("kk")) {
        const json& k = doc.at("kk");
        check_keys(k, "kk", {"omega_max_ghz", "cells", "excision_cells", "tail_correction"});
        cfg.kk.omega_max_ghz = number_or(k, "kk", "omega_max_ghz", 0.0);
        cfg.kk.cells = integer_or(k, "kk", "cells", cfg.kk.cells);
        cfg.kk.excision_cells = number_or(k, "kk", "excision_cells", cfg.kk.excision_cells);
        if (k.contains("tail_correction")) {
            require(k.at("tail_correction").is_boolean(), "kk.tail_correction: expected a boolean");
            cfg.kk.tail_correction = k.at("tail_correction").get<bool>();
        }
    }
    require(cfg.kk.omega_max_ghz >= 0.0, "kk.omega_max_ghz: must be non-negative");
    require(cfg.kk.cells >= 1, "kk.cells: must be at least 1");
    require(cfg.kk.excision_cells > 0.0, "kk.excision_cells: must be positive");

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        check_keys(s, "sweep", {"nu", "kappa", "freq_ghz", "probes_ghz"});
        cfg.sweep.nu = string_or(s, "sweep", "nu", "");
        cfg.sweep.kappa = string_or(s, "sweep", "kappa", "");
        cfg.sweep.freq_ghz = string_or(s, "sweep", "freq_ghz", "");
        if (s.contains("probes_ghz")) {
            const json& p = s.at("probes_ghz");
            require(p.is_array(), "sweep.probes_ghz: expected an array");
            for (const auto& v : p) {
                require(v.is_number(), "sweep.probes_ghz: expected numbers");
                cfg.sweep.probes_ghz.push_back(v.get<double>());
            }
        }
    }

    if (doc.contains("lamb_shift")) {
        const json& l = doc.at("lamb_shift");
        check_keys(l, "lamb_shift", {"target_no_dispersion_mhz"});
        if (l.contains("target_no_dispersion_mhz"))
            cfg.target_no_dispersion_mhz = number(l, "lamb_shift", "target_no_dispersion_mhz");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

void resolve(RunConfig& config) {
    if (!config.material || !config.calibrate_red_shift) return;
    if (!config.geometry)
        throw ConfigError("material.calibrate_red_shift: needs a geometry section");
    try {
        config.material->impedance_prefactor = calibrate_impedance_prefactor(
            *config.material, *config.geometry, *config.calibrate_red_shift,
            config.fixed_point_options());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("material.calibrate_red_shift: ") + e.what());
    }
    config.calibrate_red_shift.reset();
}

json to_json(const RunConfig& config) {
    json out = json::object();
    if (!config.label.empty()) out["label"] = config.label;
    if (config.material) {
        const Material& m = *config.material;
        json j{{"name", m.name},
               {"gap_frequency_ghz", m.gap_frequency_ghz},
               {"limit_regime", to_string(m.regime)}};
        if (config.calibrate_red_shift)
            j["calibrate_red_shift"] = *config.calibrate_red_shift;
        else
            j["impedance_prefactor"] = m.impedance_prefactor;
        out["material"] = j;
    }
    if (config.geometry) {
        const ResonatorGeometry& g = *config.geometry;
        json qubits = json::array();
        for (const auto& q : g.qubits) qubits.push_back({{"x", q.x}, {"C_s", q.C_s}, {"gamma", q.gamma}});
        out["geometry"] = {{"length", g.length}, {"ell_m", g.ell_m}, {"c", g.c},
                           {"g_geom", g.g_geom}, {"qubits", qubits}};
    }
    if (config.qubit)
        out["qubit"] = {{"Omega_q", config.qubit->Omega_q},
                        {"x_q", config.qubit->x_q},
                        {"dipole_prefactor", config.qubit->dipole_prefactor}};
    out["solver"] = {{"tol", config.solver.tol},
                     {"max_iter", config.solver.max_iter},
                     {"relaxation", config.solver.relaxation},
                     {"N_max", config.solver.N_max},
                     {"epsilon_gap", config.solver.epsilon_gap}};
    out["output"] = {{"format", config.output.format},
                     {"path", config.output.path},
                     {"precision", config.output.precision}};
    out["kk"] = {{"omega_max_ghz", config.kk.omega_max_ghz},
                 {"cells", config.kk.cells},
                 {"excision_cells", config.kk.excision_cells},
                 {"tail_correction", config.kk.tail_correction}};
    json sweep = json::object();
    if (!config.sweep.nu.empty()) sweep["nu"] = config.sweep.nu;
    if (!config.sweep.kappa.empty()) sweep["kappa"] = config.sweep.kappa;
    if (!config.sweep.freq_ghz.empty()) sweep["freq_ghz"] = config.sweep.freq_ghz;
    if (!config.sweep.probes_ghz.empty()) sweep["probes_ghz"] = config.sweep.probes_ghz;
    if (!sweep.empty()) out["sweep"] = sweep;
    if (config.target_no_dispersion_mhz)
        out["lamb_shift"] = {{"target_no_dispersion_mhz", *config.target_no_dispersion_mhz}};
    return out;
}

std::vector<double> parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("range '" + text + "': cannot parse '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(v))
            throw ConfigError("range '" + text + "': cannot parse '" + s + "'");
        return v;
    };
    if (parts.size() == 1) {
        if (text.empty()) return {};
        return {to_double(parts[0])};
    }
    if (parts.size() != 3) throw ConfigError("range '" + text + "': expected start:stop:count");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    const double n = to_double(parts[2]);
    if (n < 0.0 || n != std::floor(n)) throw ConfigError("range '" + text + "': bad count");
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / (count - 1));
    return out;
}

}  // namespace dcqed
