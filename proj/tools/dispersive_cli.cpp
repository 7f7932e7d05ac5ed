// dispersive_cli: sweeps and spectra as CSV
//
//   dispersive_cli <shift-sweep|spectrum|effective-model|ground-state|residual-scan>
//                  --config <path> [--out <path>]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dispersive/config.hpp"
#include "dispersive/csv.hpp"
#include "dispersive/sweep.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Command {
    const char* name;
    dispersive::Mode mode;
    const char* help;
};

constexpr Command kCommands[] = {
    {"shift-sweep", dispersive::Mode::ShiftSweep, "oscillator shift: closed forms vs exact diagonalisation"},
    {"spectrum", dispersive::Mode::Spectrum, "lowest eigenvalues with bare-state labels"},
    {"effective-model", dispersive::Mode::EffectiveModel, "pair couplings, excitation commutators, spectra"},
    {"ground-state", dispersive::Mode::GroundState, "two-qubit ground-state energy and concurrence"},
    {"residual-scan", dispersive::Mode::ResidualScan, "frame-transformation remainder and its scaling"},
};

int run(dispersive::Mode mode, const std::string& config_path, const std::string& out_override) {
    using namespace dispersive;
    SweepConfig cfg;
    try {
        cfg = load_config(config_path);
        if (cfg.mode != mode)
            throw ConfigError("config mode '" + std::string(to_string(cfg.mode)) + "' does not match subcommand");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (!out_override.empty()) cfg.output = out_override;

    CsvTable table;
    try {
        table = run_mode(cfg);
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }

    if (cfg.output.empty()) {
        write_csv(std::cout, table);
        return std::cout ? 0 : kExitConfig;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << cfg.output << "'\n";
        return kExitConfig;
    }
    write_csv(out, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive qubit-oscillator shifts beyond the rotating-wave approximation"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_path;
    dispersive::Mode chosen = dispersive::Mode::ShiftSweep;
    for (const auto& c : kCommands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config_path, "key = value run configuration")->required();
        sub->add_option("--out", out_path, "CSV output path, overrides the config");
        sub->callback([&chosen, mode = c.mode] { chosen = mode; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    return run(chosen, config_path, out_path);
}
