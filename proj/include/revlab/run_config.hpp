// Plain-text key/value run configuration: flat sections, numbers, strings and
// comma-separated number lists. Validation fills defaults, checks ranges and
// rejects unknown keys with a nearest-key suggestion; errors are aggregated
// and reported together.
#ifndef REVLAB_RUN_CONFIG_HPP
#define REVLAB_RUN_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "revlab/builtin_systems.hpp"

namespace revlab {

struct RunConfig {
    std::string command;
    unsigned long long seed = 12345;
    int threads = 1;
    std::string out_dir = "out";
    BuiltinSpec system;                                 // [system] section
    std::map<std::string, double> chart;                // [chart] section (validated keys)
    std::map<std::string, double> op;                   // [op] numeric keys, defaults filled
    std::map<std::string, std::string> op_str;          // [op] string keys
    std::map<std::string, std::vector<double>> op_list; // [op] list keys
    std::vector<std::string> notes;                     // applied defaults etc.
};

// Known subcommand names, in the order the CLI documents them.
const std::vector<std::string>& known_commands();

// Parses and validates; throws validation_error carrying every problem found.
RunConfig validate_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

}  // namespace revlab

#endif
