#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dcqed/commands.hpp"
#include "dcqed/errors.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive circuit QED resonator calculator"};
    app.require_subcommand(1, 1);

    std::string config_path, out_path, format;
    dcqed::cli::CommandArgs args;
    std::string probes;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output path (overrides output.path)");
        sub->add_option("--format", format, "csv or json (overrides output.format)")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* conductivity = app.add_subcommand("conductivity", "Mattis-Bardeen conductivity sweep");
    add_common(conductivity);
    conductivity->add_option("--nu", args.nu, "reduced frequency range start:stop:count");
    conductivity->add_option("--kappa", args.kappa, "reduced decay range start:stop:count");
    conductivity->add_flag("--oracle", args.oracle, "add piecewise quadrature columns");

    auto* impedance = app.add_subcommand("impedance", "surface impedance and refractive index");
    add_common(impedance);
    impedance->add_option("--freq", args.freq_ghz, "frequency range in GHz");

    auto* modes = app.add_subcommand("modes", "complex mode eigenfrequencies and couplings");
    add_common(modes);

    auto* density = app.add_subcommand("spectral-density", "spectral density above the gap");
    add_common(density);
    density->add_option("--freq", args.freq_ghz, "frequency range in GHz");

    auto* lamb = app.add_subcommand("lamb-shift", "Lamb shift residue sum and convergence");
    add_common(lamb);
    lamb->add_option("--model", args.model, "all, dispersion, below_bandgap or no_dispersion");

    auto* kk = app.add_subcommand("kk-check", "Kramers-Kronig consistency of Z_s");
    add_common(kk);
    kk->add_option("--probes", probes, "comma separated probe frequencies in GHz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        if (!probes.empty()) {
            std::stringstream ss(probes);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    args.probes_ghz.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw dcqed::ConfigError("probes: cannot parse '" + item + "'");
                }
            }
        }
        dcqed::RunConfig config = dcqed::load_config(config_path);
        if (!format.empty()) config.output.format = format;
        if (!out_path.empty()) config.output.path = out_path;
        dcqed::resolve(config);
        const auto result = dcqed::cli::run_command(command, config, args);
        dcqed::cli::write_outputs(command, config, result, config.output.path);
        if (result.numerical_failure) {
            std::cerr << "dispersive-cqed: numerical failure, see status column\n";
            return kNumericalFailure;
        }
        return 0;
    } catch (const dcqed::ConfigError& e) {
        std::cerr << "dispersive-cqed: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const dcqed::Error& e) {
        std::cerr << "dispersive-cqed: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}
