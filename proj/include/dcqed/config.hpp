#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcqed/lightmatter.hpp"

namespace dcqed {

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    double relaxation = 0.5;
    int N_max = 2500;
    double epsilon_gap = mb::kGapGuard;
};

struct OutputConfig {
    std::string format = "csv";
    std::string path;
    int precision = 12;
};

struct KKConfig {
    double omega_max_ghz = 0.0;  // 0 selects 50x the gap frequency
    int cells = 2000;
    double excision_cells = 1.0;
    bool tail_correction = true;
};

struct SweepConfig {
    std::string nu;
    std::string kappa;
    std::string freq_ghz;
    std::vector<double> probes_ghz;
};

struct RunConfig {
    std::string label;
    std::optional<Material> material;
    std::optional<double> calibrate_red_shift;
    std::optional<ResonatorGeometry> geometry;
    std::optional<QubitParams> qubit;
    SolverConfig solver;
    OutputConfig output;
    KKConfig kk;
    SweepConfig sweep;
    std::optional<double> target_no_dispersion_mhz;
    std::vector<std::string> defaults_used;

    FixedPointOptions fixed_point_options() const;
    const Material& require_material() const;
    const ResonatorGeometry& require_geometry() const;
    const QubitParams& require_qubit() const;
};

// Validates every section and rejects unknown keys (ConfigError).
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Calibrates the impedance prefactor when requested; needs the geometry.
void resolve(RunConfig& config);

// Fully explicit form of a resolved configuration; parse_config accepts it back.
nlohmann::json to_json(const RunConfig& config);

// "a:b:n" gives n evenly spaced values including both ends; "a" gives one value.
std::vector<double> parse_range(const std::string& text);

}  // namespace dcqed
