#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "layerfield/fd.hpp"

namespace layerfield::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_validation = 2,
    exit_convergence = 3,
    exit_regime_warning = 4,
};

struct RunOptions {
    bool strict = false;
    std::size_t threads = 1;
    std::optional<std::filesystem::path> out;
};

/// Runs one subcommand (solve, compare, verify, regimes) and maps library
/// errors to exit codes. Reports go to `out` unless --out names a file;
/// diagnostics go to `err`.
int run(const std::string& command, const std::filesystem::path& config, const RunOptions& opts, std::ostream& out,
        std::ostream& err);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Parses a grid CSV as written by solve (x,y,region,u or r,theta,region,u).
GridSolution read_grid_csv(const std::filesystem::path& path, ProblemKind kind);

/// Thread count from LAYERFIELD_THREADS, falling back to the hardware count.
std::size_t default_threads();

} // namespace layerfield::cli
