// revlab command-line front end: one config, one subcommand, one bundle.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "revlab/errors.hpp"
#include "revlab/run_config.hpp"
#include "revlab/subcommands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"revlab: a numerical laboratory for planar reversible maps"};
    std::string config_path;
    std::string out_dir;
    long seed = -1;
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "path to the run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads for grid scans");
    app.add_flag("--verbose", verbose, "print progress details");
    CLI11_PARSE(app, argc, argv);

    try {
        revlab::RunConfig cfg = revlab::load_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
        if (threads > 0) cfg.threads = threads;
        if (verbose) {
            std::fprintf(stderr, "command: %s\nout: %s\nseed: %llu\nthreads: %d\n",
                         cfg.command.c_str(), cfg.out_dir.c_str(), cfg.seed, cfg.threads);
            for (const std::string& n : cfg.notes) std::fprintf(stderr, "note: %s\n", n.c_str());
        }
        const revlab::RunResult res = revlab::run(cfg);
        std::printf("%s: %s\n", cfg.command.c_str(), res.summary.c_str());
        if (verbose)
            for (const std::string& f : res.files_written)
                std::fprintf(stderr, "wrote %s\n", f.c_str());
        return 0;
    } catch (const revlab::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const revlab::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
