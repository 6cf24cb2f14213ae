#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "layerfield/fd.hpp"
#include "layerfield/report.hpp"
#include "layerfield/theorems.hpp"

namespace layerfield::cli {

/// Tensor grid of the config, axis1-major. Polar angles are 2 pi j / n2.
struct Nodes {
    std::vector<double> axis1, axis2;
    bool polar = false;

    std::size_t size() const { return axis1.size() * axis2.size(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * axis2.size() + j; }
    Point2 point(std::size_t k) const;
};

Nodes make_nodes(const RunConfig& cfg);

struct Evaluation {
    std::vector<double> values;
    std::vector<Region> regions;
    std::vector<double> bounds; ///< per node; empty when the method has no bound
};

/// Image series with the configured truncation. J together with tol raises
/// ConvergenceError when the tail bound at J exceeds tol.
LayeredSolution series_solution(const RunConfig& cfg);
Approximation asymptotic_solution(const RunConfig& cfg);

/// Values of a method on the nodes. The oracle runs the finite-difference
/// solver on exactly this grid (strip, annulus, coupled disk) or the
/// closed-form / brute image sum (coupled half-plane).
Evaluation evaluate(const RunConfig& cfg, Method method, const Nodes& nodes, std::size_t threads);

struct RegimeSummary {
    std::optional<double> rho;
    std::optional<std::size_t> terms;
    Recommendation recommendation = Recommendation::series;
    double tol = 0.0;
    std::optional<double> sup_bound;
    std::size_t threshold = 0;
};

RegimeSummary regimes(const RunConfig& cfg);

struct PairDiff {
    std::size_t a = 0, b = 0;
    double max_abs_diff = 0.0;
};

struct SweepRow {
    double value = 0.0;
    double thickness = 0.0;
    std::optional<double> k;
    double max_abs_diff = 0.0;
};

struct Comparison {
    Nodes nodes;
    std::vector<Evaluation> evals;
    std::vector<PairDiff> pairs;
    double max_abs_diff = 0.0;
    std::vector<std::optional<double>> max_bound;
    std::size_t rows = 0;
    std::vector<SweepRow> sweep;
    std::optional<double> thickness_order;
};

Comparison compare(const RunConfig& cfg, std::size_t threads);
void write_comparison_csv(std::ostream& os, const RunConfig& cfg, const Comparison& cmp);

/// Least-squares slope of log(err) against log(thickness).
std::optional<double> loglog_slope(const std::vector<double>& thickness, const std::vector<double>& err);

/// One verdict. Gridded solutions add an allowance for the check's own
/// discretization error, estimated as the change between the fourth- and
/// sixth-order grid checks; the check passes when value <= tol + allowance.
struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    double allowance = 0.0;
    bool pass = false;
};

struct Verification {
    std::string source;
    ErrorReport report;
    std::vector<Check> checks;
    bool pass = false;
};

ProblemSpec problem_spec(const RunConfig& cfg);
Verification verify(const RunConfig& cfg, std::size_t threads);

} // namespace layerfield::cli
