// simulate: Runs one experiment config, or the acceptance suite with --accept.
#include "rabi/cli/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace rabi::cli;

    CLI::App app{"Driven quantum Rabi model simulator and pulse compiler"};
    std::string config_path;
    bool accept = false;
    int dim = 0;
    int workers = 0;
    std::string out_dir = ".";
    app.add_option("config", config_path, "experiment config file (key = value lines)")->required();
    app.add_flag("--accept", accept, "run the acceptance suite; exit 3 on any miss");
    app.add_option("--dim", dim, "boson truncation, overrides the config")->check(CLI::Range(8, 4096));
    app.add_option("--workers", workers, "worker threads (default: one per core)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "output directory for CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    RunOptions options;
    if (dim > 0) options.dim = dim;
    options.workers = workers;
    options.out_dir = out_dir;

    try {
        const Config config = Config::load(config_path);
        if (accept) return run_accept(config, options, std::cout);
        const RunSummary summary = run_experiment(config, options);
        for (const auto& n : summary.notes) std::cout << n << '\n';
        for (const auto& f : summary.files) std::cout << "wrote " << f.string() << '\n';
        return kExitOk;
    } catch (const rabi::Error& e) {
        std::cerr << "error kind=" << rabi::to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error kind=internal message=\"" << e.what() << "\"\n";
        return kExitNumeric;
    }
}
