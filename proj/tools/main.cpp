#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "layerfield/error.hpp"

int main(int argc, char** argv) {
    namespace lc = layerfield::cli;
    CLI::App app{"Layered harmonic field solver"};
    app.require_subcommand(1);

    std::string config, out;
    bool strict = false;
    std::size_t threads = 0;
    for (const char* name : {"solve", "compare", "verify", "regimes"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "run configuration (JSON)")->required();
        sub->add_option("--out", out, "output path (CSV for solve, JSON otherwise)");
        sub->add_flag("--strict", strict, "treat regime warnings as errors (exit 4)");
        sub->add_option("--threads", threads, "worker threads (default: LAYERFIELD_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lc::exit_validation;
    }

    lc::RunOptions opts;
    opts.strict = strict;
    if (!out.empty()) opts.out = out;
    try {
        opts.threads = threads > 0 ? threads : lc::default_threads();
    } catch (const layerfield::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return lc::exit_validation;
    }
    return lc::run(app.get_subcommands().front()->get_name(), config, opts, std::cout, std::cerr);
}
