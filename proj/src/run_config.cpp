#include "revlab/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab {

namespace {

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<RawEntry> parse_entries(const std::string& text, std::vector<std::string>& errors) {
    std::vector<RawEntry> out;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        RawEntry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        out.push_back(e);
    }
    return out;
}

bool parse_number(const std::string& s, double& v) {
    std::istringstream is(s);
    is >> v;
    return bool(is) && is.eof();
}

bool parse_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        double v;
        if (!parse_number(trim(item), v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = int(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggest(const std::string& key, const std::vector<std::string>& known) {
    std::string best;
    int best_d = 1000;
    for (const std::string& k : known) {
        const int d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    if (best_d <= std::max<int>(2, int(key.size()) / 3)) return " (did you mean '" + best + "'?)";
    return "";
}

enum class KeyKind { number, integer, text, list };

struct KeySpec {
    const char* key;
    KeyKind kind;
    bool required = false;
    double def = 0.0;
    double lo = -1e308;
    double hi = 1e308;
    const char* def_text = "";
    std::vector<std::string> choices = {};
};

using Schema = std::vector<KeySpec>;

const std::map<std::string, Schema>& op_schemas() {
    static const std::map<std::string, Schema> schemas = {
        {"check-rev",
         {{"samples", KeyKind::integer, false, 1000, 1, 1e7},
          {"tol", KeyKind::number, false, 0.0, 0.0, 1.0}}},
        {"find-sym-orbits",
         {{"source", KeyKind::text, false, 0, 0, 0, "g", {"g", "h2"}},
          {"s_lo", KeyKind::number, true},
          {"s_hi", KeyKind::number, true},
          {"k", KeyKind::integer, false, 1, 1, 1e6},
          {"scan_points", KeyKind::integer, false, 512, 2, 1e7},
          {"refine_tol", KeyKind::number, false, 1e-12, 1e-16, 1.0},
          {"closure_tol", KeyKind::number, false, 1e-9, 1e-15, 1.0},
          {"classify_tol", KeyKind::number, false, 1e-6, 1e-15, 1.0},
          {"shift_x", KeyKind::number, false, 0.0},
          {"shift_y", KeyKind::number, false, 0.0}}},
        {"nf-portrait",
         {{"rho_max", KeyKind::number, false, 0.0, 0.0, 10.0},
          {"grid_rho", KeyKind::integer, false, 24, 2, 4096},
          {"grid_phi", KeyKind::integer, false, 48, 2, 4096},
          {"trajectories", KeyKind::integer, false, 12, 0, 4096},
          {"t_max", KeyKind::number, false, 200.0, 0.0, 1e9}}},
        {"nf-equilibria",
         {{"rho_max", KeyKind::number, false, 0.0, 0.0, 10.0},
          {"scan_points", KeyKind::integer, false, 400, 8, 1e6},
          {"angle_tol", KeyKind::number, false, 1e-10, 0.0, 1.0},
          {"collar", KeyKind::number, false, 1e-9, 0.0, 1.0}}},
        {"pendulum-check",
         {{"mu_abs_lo", KeyKind::number, false, 1e-6, 1e-15, 1.0},
          {"mu_abs_hi", KeyKind::number, false, 1e-3, 1e-15, 1.0},
          {"points", KeyKind::integer, false, 8, 2, 256},
          {"u_lo", KeyKind::number, false, -1.0},
          {"u_hi", KeyKind::number, false, 1.0},
          {"n_phi", KeyKind::integer, false, 41, 3, 4096},
          {"n_u", KeyKind::integer, false, 41, 3, 4096}}},
        {"mu-sweep",
         {{"mu_lo", KeyKind::number, false, -0.02},
          {"mu_hi", KeyKind::number, false, 0.02},
          {"resolution", KeyKind::integer, false, 21, 2, 1e6}}},
        {"pitchfork-scan",
         {{"A_values", KeyKind::list, true},
          {"mu_lo", KeyKind::number, false, 0.0},
          {"mu_hi", KeyKind::number, false, 0.0},
          {"mu_resolution", KeyKind::integer, false, 11, 2, 1e6}}},
        {"certify-sink-source", {}},
        {"map-confirm",
         {{"integrator_tol", KeyKind::number, false, 1e-13, 1e-16, 1e-3},
          {"newton_tol", KeyKind::number, false, 1e-11, 1e-16, 1e-3},
          {"which", KeyKind::text, false, 0, 0, 0, "all",
           {"all", "symmetric", "asymmetric"}}}},
        {"rotation",
         {{"theta0", KeyKind::number, false, 0.0},
          {"rho0", KeyKind::number, false, 0.0},
          {"iterates", KeyKind::integer, false, 10000, 8, 1e8}}},
        {"diophantine",
         {{"psi0", KeyKind::number, true},
          {"alpha", KeyKind::number, true, 0, 1e-8, 100},
          {"k_max", KeyKind::integer, true, 0, 1, 1e9}}},
        {"twist",
         {{"rho_window", KeyKind::number, false, 0.05, 1e-12, 100},
          {"offsets", KeyKind::integer, false, 2, 1, 64},
          {"iterates", KeyKind::integer, false, 8192, 8, 1e8}}},
        {"fmn-roots",
         {{"m", KeyKind::list, true},
          {"n", KeyKind::list, true},
          {"rho_in", KeyKind::number, true},
          {"rho_out", KeyKind::number, true},
          {"theta_seeds", KeyKind::integer, false, 12, 1, 4096},
          {"newton_tol", KeyKind::number, false, 1e-11, 1e-16, 1.0},
          {"bound_iterates", KeyKind::integer, false, 8192, 64, 1e8},
          {"gate_policy", KeyKind::text, false, 0, 0, 0, "warn", {"warn", "reject"}}}},
        {"averaged-fit",
         {{"rho_max", KeyKind::number, false, 0.12, 1e-12, 100},
          {"n_rho", KeyKind::integer, false, 8, 2, 256},
          {"n_theta", KeyKind::integer, false, 96, 4, 65536},
          {"degree", KeyKind::integer, false, 4, 1, 8}}},
    };
    return schemas;
}

const Schema& chart_schema() {
    static const Schema schema = {
        {"r0", KeyKind::number, false, 1.0, 1e-12, 1e12},
        {"target_rotation", KeyKind::number, false, 0.0, -10.0, 10.0},
        {"seed_x", KeyKind::number, false, 0.0},
        {"seed_y_lo", KeyKind::number, false, 0.0},
        {"seed_y_hi", KeyKind::number, false, 0.0},
        {"fit_iterates", KeyKind::integer, false, 16384, 256, 1e7},
        {"rot_iterates", KeyKind::integer, false, 32768, 256, 1e8},
        {"fourier_order", KeyKind::integer, false, 28, 1, 512},
        {"grid", KeyKind::integer, false, 256, 8, 65536},
        {"normalize_order", KeyKind::integer, false, 2, 0, 2},
        {"extract_step", KeyKind::number, false, 0.02, 1e-8, 10.0},
        {"center_offset", KeyKind::number, false, 0.0, -100.0, 100.0},
    };
    return schema;
}

const std::vector<std::string>& system_keys() {
    static const std::vector<std::string> keys = {"name", "psi",  "k", "twist", "p",    "q",
                                                  "mu",   "A",    "B", "C",     "tol",  "guard"};
    return keys;
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = {
        "check-rev",      "find-sym-orbits", "nf-portrait",         "nf-equilibria",
        "pendulum-check", "mu-sweep",        "pitchfork-scan",      "certify-sink-source",
        "map-confirm",    "rotation",        "diophantine",         "twist",
        "fmn-roots",      "averaged-fit"};
    return cmds;
}

RunConfig validate_config(const std::string& text) {
    std::vector<std::string> errors;
    const std::vector<RawEntry> entries = parse_entries(text, errors);
    RunConfig cfg;

    // top-level pass: command, seed, threads, out
    for (const RawEntry& e : entries) {
        if (!e.section.empty()) continue;
        if (e.key == "command") cfg.command = e.value;
        else if (e.key == "seed") {
            double v;
            if (!parse_number(e.value, v) || v < 0 || v != std::floor(v))
                errors.push_back("seed: expected a non-negative integer, got '" + e.value + "'");
            else cfg.seed = (unsigned long long)(v);
        } else if (e.key == "threads") {
            double v;
            if (!parse_number(e.value, v) || v < 1 || v != std::floor(v))
                errors.push_back("threads: expected a positive integer, got '" + e.value + "'");
            else cfg.threads = int(v);
        } else if (e.key == "out") cfg.out_dir = e.value;
        else
            errors.push_back("unknown top-level key '" + e.key + "'" +
                             suggest(e.key, {"command", "seed", "threads", "out"}));
    }

    if (cfg.command.empty()) {
        errors.push_back("missing required key 'command'");
    } else if (op_schemas().find(cfg.command) == op_schemas().end()) {
        errors.push_back("unknown command '" + cfg.command + "'" +
                         suggest(cfg.command, known_commands()));
    }

    // [system]
    for (const RawEntry& e : entries) {
        if (e.section != "system") continue;
        if (e.key == "name") {
            cfg.system.name = e.value;
        } else if (e.key == "psi") {
            if (!parse_list(e.value, cfg.system.psi)) {
                errors.push_back("system.psi: expected a comma-separated number list, got '" +
                                 e.value + "'");
            } else if (cfg.system.psi.size() == 1) {
                // rigid-rotation reads psi as its scalar angle
                cfg.system.params["psi"] = cfg.system.psi[0];
            }
        } else if (std::find(system_keys().begin(), system_keys().end(), e.key) !=
                   system_keys().end()) {
            double v;
            if (!parse_number(e.value, v))
                errors.push_back("system." + e.key + ": expected a number, got '" + e.value + "'");
            else cfg.system.params[e.key] = v;
        } else {
            errors.push_back("unknown system key '" + e.key + "'" + suggest(e.key, system_keys()));
        }
    }

    // [chart]
    for (const RawEntry& e : entries) {
        if (e.section != "chart") continue;
        const KeySpec* spec = nullptr;
        for (const KeySpec& k : chart_schema())
            if (e.key == k.key) spec = &k;
        if (!spec) {
            std::vector<std::string> keys;
            for (const KeySpec& k : chart_schema()) keys.push_back(k.key);
            errors.push_back("unknown chart key '" + e.key + "'" + suggest(e.key, keys));
            continue;
        }
        double v;
        if (!parse_number(e.value, v) ||
            (spec->kind == KeyKind::integer && v != std::floor(v))) {
            errors.push_back("chart." + e.key + ": expected a number, got '" + e.value + "'");
            continue;
        }
        if (v < spec->lo || v > spec->hi) {
            errors.push_back("chart." + e.key + ": value " + e.value + " outside [" +
                             std::to_string(spec->lo) + ", " + std::to_string(spec->hi) + "]");
            continue;
        }
        cfg.chart[e.key] = v;
    }
    for (const KeySpec& k : chart_schema())
        if (cfg.chart.find(k.key) == cfg.chart.end()) cfg.chart[k.key] = k.def;

    // [op] against the command schema
    if (!cfg.command.empty() && op_schemas().count(cfg.command)) {
        const Schema& schema = op_schemas().at(cfg.command);
        std::vector<std::string> keys;
        for (const KeySpec& k : schema) keys.push_back(k.key);
        for (const RawEntry& e : entries) {
            if (e.section != "op") continue;
            const KeySpec* spec = nullptr;
            for (const KeySpec& k : schema)
                if (e.key == k.key) spec = &k;
            if (!spec) {
                errors.push_back("unknown op key '" + e.key + "' for command '" + cfg.command +
                                 "'" + suggest(e.key, keys));
                continue;
            }
            switch (spec->kind) {
                case KeyKind::text: {
                    if (!spec->choices.empty() &&
                        std::find(spec->choices.begin(), spec->choices.end(), e.value) ==
                            spec->choices.end()) {
                        std::string allowed;
                        for (const std::string& c : spec->choices) allowed += c + " ";
                        errors.push_back("op." + e.key + ": '" + e.value +
                                         "' is not one of: " + allowed);
                    } else {
                        cfg.op_str[e.key] = e.value;
                    }
                    break;
                }
                case KeyKind::list: {
                    std::vector<double> vals;
                    if (!parse_list(e.value, vals))
                        errors.push_back("op." + e.key +
                                         ": expected a comma-separated number list, got '" +
                                         e.value + "'");
                    else cfg.op_list[e.key] = vals;
                    break;
                }
                case KeyKind::integer:
                case KeyKind::number: {
                    double v;
                    if (!parse_number(e.value, v) ||
                        (spec->kind == KeyKind::integer && v != std::floor(v))) {
                        errors.push_back("op." + e.key + ": expected " +
                                         (spec->kind == KeyKind::integer ? "an integer"
                                                                         : "a number") +
                                         ", got '" + e.value + "'");
                        break;
                    }
                    if (v < spec->lo || v > spec->hi) {
                        errors.push_back("op." + e.key + ": value " + e.value + " outside [" +
                                         std::to_string(spec->lo) + ", " +
                                         std::to_string(spec->hi) + "]");
                        break;
                    }
                    cfg.op[e.key] = v;
                    break;
                }
            }
        }
        // required keys and defaults
        for (const KeySpec& k : schema) {
            const bool have = cfg.op.count(k.key) || cfg.op_str.count(k.key) ||
                              cfg.op_list.count(k.key);
            if (have) continue;
            if (k.required) {
                errors.push_back("missing required op key '" + std::string(k.key) +
                                 "' for command '" + cfg.command + "'");
                continue;
            }
            switch (k.kind) {
                case KeyKind::text: cfg.op_str[k.key] = k.def_text; break;
                case KeyKind::list: break;
                default: cfg.op[k.key] = k.def; break;
            }
            cfg.notes.push_back("default applied: op." + std::string(k.key));
        }
    }

    // stray sections
    for (const RawEntry& e : entries) {
        if (!e.section.empty() && e.section != "system" && e.section != "chart" &&
            e.section != "op") {
            errors.push_back("unknown section [" + e.section + "]" +
                             suggest(e.section, {"system", "chart", "op"}));
            break;
        }
    }

    if (!errors.empty()) {
        std::string msg = "configuration invalid (" + std::to_string(errors.size()) + " error(s)):";
        for (const std::string& e : errors) msg += "\n  - " + e;
        throw validation_error(msg);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw validation_error("cannot read config file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return validate_config(os.str());
}

}  // namespace revlab
