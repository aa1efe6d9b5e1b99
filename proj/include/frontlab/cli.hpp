#pragma once

#include <ctime>
#include <iosfwd>
#include <string>
#include <vector>

namespace frontlab {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_audit_failure = 2,
    exit_inconclusive = 3,
};

struct CliFlags {
    // asym-demo: use the coarse preset regardless of the config.
    bool smoke = false;
    // Overrides the environment and the config's [output] directory when set.
    std::string output_dir;
};

// Subcommands understood by run_command.
const std::vector<std::string>& cli_commands();

// Environment variable that overrides the output directory of the config.
inline constexpr const char* kOutputDirEnv = "FRONTLAB_OUTPUT_DIR";

// "<YYYYmmdd-HHMMSS>-<first 12 hex digits of hash>-<command>" (UTC).
std::string run_directory_name(std::time_t when, const std::string& hash,
                               const std::string& command);

// Runs one subcommand. Artifacts (CSV, JSON lines, manifest) go to a fresh run
// directory, the summary to `out` and diagnostics to `err`. Returns an ExitCode.
int run_command(const std::string& command, const std::string& config_path, const CliFlags& flags,
                std::ostream& out, std::ostream& err);

// Parses argv and dispatches to run_command.
int cli_main(int argc, char** argv);

}  // namespace frontlab
