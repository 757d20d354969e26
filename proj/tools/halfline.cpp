#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "halfline/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Scattering, bound states and Levinson checks for half-line matrix Schroedinger operators"};
    std::string command;
    std::string config_path;
    std::string out_path;
    bool strict = true;
    halfline::CommandOptions opt;

    app.add_option("command", command, "validate | canonicalize | scattering | boundstates | levinson | asymptotics")
        ->required()
        ->check(CLI::IsMember(halfline::command_names()));
    app.add_option("--config", config_path, "problem configuration (JSON)")->required();
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--tol-integrator", opt.tol_integrator, "integrator relative tolerance");
    app.add_option("--kappa-max", opt.kappa_max, "upper end of the bound-state search");
    app.add_option("--k-max", opt.k_max, "starting upper end of the phase trace");
    app.add_flag("--strict,!--no-strict", strict, "reject unknown configuration keys (default on)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : halfline::kExitParse;
    }

    try {
        const halfline::ProblemConfig cfg = halfline::load_config(config_path, strict);
        const halfline::CommandResult result = halfline::run_command(command, cfg, opt);
        if (out_path.empty()) {
            std::cout << result.output;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << out_path << "\n";
                return halfline::kExitParse;
            }
            out << result.output;
        }
        return result.status;
    } catch (const halfline::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return halfline::exit_status(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return halfline::kExitNumerical;
    }
}
