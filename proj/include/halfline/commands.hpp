#pragma once

// Batch commands behind the command-line front end.  Each returns the
// document it would write together with the process exit status.

#include <optional>
#include <string>
#include <vector>

#include "halfline/config.hpp"

namespace halfline {

struct CommandOptions {
    std::optional<double> tol_integrator;
    std::optional<double> kappa_max;
    std::optional<double> k_max;
};

struct CommandResult {
    int status = 0;
    std::string output;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitParse = 4;

int exit_status(ErrorKind kind);

const std::vector<std::string>& command_names();

CommandResult cmd_validate(const ProblemConfig& cfg);
CommandResult cmd_canonicalize(const ProblemConfig& cfg);
CommandResult cmd_scattering(const ProblemConfig& cfg, const CommandOptions& opt = {});
CommandResult cmd_boundstates(const ProblemConfig& cfg, const CommandOptions& opt = {});
CommandResult cmd_levinson(const ProblemConfig& cfg, const CommandOptions& opt = {});
CommandResult cmd_asymptotics(const ProblemConfig& cfg, const CommandOptions& opt = {});

/// Dispatch by name.  halfline::Error propagates to the caller.
CommandResult run_command(const std::string& name, const ProblemConfig& cfg, const CommandOptions& opt = {});

/// printf("%.17g").
std::string format_double(double x);

} // namespace halfline
