// Subcommand execution: every operation of the library is reachable through
// run(config), which emits a deterministic report bundle.
#ifndef REVLAB_SUBCOMMANDS_HPP
#define REVLAB_SUBCOMMANDS_HPP

#include <string>
#include <vector>

#include "revlab/run_config.hpp"

namespace revlab {

struct RunResult {
    std::vector<std::string> files_written;
    std::string summary;  // one-line outcome for the console
};

// Executes the configured subcommand and writes the bundle into cfg.out_dir.
// Throws validation_error for schema/precondition problems (exit code 2) and
// numerical_error for solver failures (exit code 3).
RunResult run(const RunConfig& cfg);

}  // namespace revlab

#endif
