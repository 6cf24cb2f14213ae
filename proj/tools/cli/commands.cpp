#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "cli/engine.hpp"
#include "layerfield/error.hpp"
#include "layerfield/oracle.hpp"
#include "layerfield/report.hpp"
#include "layerfield/theorems.hpp"

namespace layerfield::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::size_t default_threads() {
    if (const char* env = std::getenv("LAYERFIELD_THREADS"); env && *env) {
        std::size_t n = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto res = std::from_chars(env, end, n);
        if (res.ec != std::errc{} || res.ptr != end || n == 0)
            throw ValidationError("LAYERFIELD_THREADS must be a positive integer");
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

GridSolution read_grid_csv(const std::filesystem::path& path, ProblemKind kind) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open grid file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("grid file is empty");
    const bool polar = is_radial(kind);
    const std::string expected = polar ? "r,theta,region,u" : "x,y,region,u";
    if (line != expected) throw ValidationError("grid header must be '" + expected + "'");

    std::vector<std::pair<double, double>> coords;
    std::vector<double> values;
    const auto parse = [&](const std::string& field) {
        double v = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
            throw ValidationError("bad number '" + field + "' in grid file");
        return v;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4) throw ValidationError("grid rows need 4 columns");
        if (cells[2] == "outside") throw ValidationError("grid contains nodes outside the problem region");
        coords.emplace_back(parse(cells[0]), parse(cells[1]));
        values.push_back(parse(cells[3]));
    }
    if (coords.empty()) throw ValidationError("grid file has no rows");
    std::size_t n2 = 0;
    while (n2 < coords.size() && coords[n2].first == coords.front().first) ++n2;
    if (coords.size() % n2 != 0) throw ValidationError("grid rows do not form a tensor grid");
    GridSolution g;
    g.kind = kind;
    for (std::size_t j = 0; j < n2; ++j) g.axis2.push_back(coords[j].second);
    for (std::size_t i = 0; i < coords.size() / n2; ++i) g.axis1.push_back(coords[i * n2].first);
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < n2; ++j)
            if (coords[i * n2 + j].first != g.axis1[i] || coords[i * n2 + j].second != g.axis2[j])
                throw ValidationError("grid rows do not form a tensor grid");
    g.values = std::move(values);
    return g;
}

namespace {

std::string region_label(Region r) {
    switch (r) {
    case Region::layer1: return "1";
    case Region::layer2: return "2";
    case Region::outside: return "outside";
    }
    return "outside";
}

// Writes to --out, else to the config's output path, else to the stream.
template <typename Writer>
void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback, Writer&& write) {
    if (!path) {
        write(fallback);
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path->string());
    write(f);
}

void write_grid_csv(std::ostream& os, const Nodes& nodes, const Evaluation& ev) {
    os << (nodes.polar ? "r,theta,region,u\n" : "x,y,region,u\n");
    for (std::size_t i = 0; i < nodes.axis1.size(); ++i)
        for (std::size_t j = 0; j < nodes.axis2.size(); ++j) {
            const std::size_t k = nodes.index(i, j);
            os << format_double(nodes.axis1[i]) << ',' << format_double(nodes.axis2[j]) << ','
               << region_label(ev.regions[k]) << ',' << format_double(ev.values[k]) << '\n';
        }
}

ordered_json nullable(std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

int cmd_solve(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
    if (cfg.methods.size() != 1) throw ValidationError("solve takes a single method");
    if (cfg.method() == Method::series) {
        const RegimeSummary reg = regimes(cfg);
        if (reg.recommendation == Recommendation::asymptotic) {
            err << "warning: the series needs " << (reg.terms ? std::to_string(*reg.terms) : std::string("too many"))
                << " terms (threshold " << reg.threshold << "); the asymptotic method is recommended\n";
            if (opts.strict) return exit_regime_warning;
        }
    }
    const Nodes nodes = make_nodes(cfg);
    const Evaluation ev = evaluate(cfg, cfg.method(), nodes, opts.threads);
    emit(opts.out ? opts.out : cfg.output, out, [&](std::ostream& os) { write_grid_csv(os, nodes, ev); });
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg, const RunOptions& opts, std::ostream& out) {
    if (cfg.methods.size() < 2) throw ValidationError("compare needs at least two methods");
    const Comparison cmp = compare(cfg, opts.threads);

    ordered_json doc;
    doc["command"] = "compare";
    doc["problem"] = to_string(cfg.problem);
    ordered_json methods = ordered_json::array();
    for (auto m : cfg.methods) methods.push_back(to_string(m));
    doc["methods"] = methods;
    doc["nodes"] = cmp.rows;
    ordered_json pairs = ordered_json::array();
    for (const auto& p : cmp.pairs)
        pairs.push_back({{"a", to_string(cfg.methods[p.a])}, {"b", to_string(cfg.methods[p.b])}, {"max_abs_diff", p.max_abs_diff}});
    doc["pairs"] = pairs;
    doc["max_abs_diff"] = cmp.max_abs_diff;
    ordered_json bounds = ordered_json::object();
    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        if (cmp.max_bound[m]) bounds[to_string(cfg.methods[m]) + "#" + std::to_string(m)] = *cmp.max_bound[m];
    doc["max_bound"] = bounds;
    if (cfg.sweep) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : cmp.sweep)
            rows.push_back({{"value", r.value}, {"thickness", r.thickness}, {"k", nullable(r.k)}, {"max_abs_diff", r.max_abs_diff}});
        doc["sweep"] = {{"parameter", cfg.sweep->parameter}, {"hold", cfg.sweep->hold}, {"rows", rows}};
        doc["thickness_order"] = nullable(cmp.thickness_order);
    }
    if (cfg.table) {
        std::ofstream f(*cfg.table, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + cfg.table->string());
        write_comparison_csv(f, cfg, cmp);
    }
    emit(opts.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, const RunOptions& opts, std::ostream& out) {
    const Verification v = verify(cfg, opts.threads);
    ordered_json doc;
    doc["command"] = "verify";
    doc["problem"] = to_string(cfg.problem);
    doc["solution"] = v.source;
    ordered_json checks = ordered_json::object();
    for (const auto& c : v.checks) checks[c.name] = {{"value", c.value}, {"tol", c.tol}, {"allowance", c.allowance}, {"pass", c.pass}};
    doc["checks"] = checks;
    doc["samples"] = {{"interior", v.report.interior_samples},
                      {"boundary", v.report.boundary_samples},
                      {"interface", v.report.interface_samples}};
    doc["lemma_bound"] = nullable(v.report.lemma_bound);
    doc["pass"] = v.pass;
    emit(opts.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return v.pass ? exit_ok : exit_verification_failed;
}

int cmd_regimes(const RunConfig& cfg, const RunOptions& opts, std::ostream& out) {
    const RegimeSummary r = regimes(cfg);
    ordered_json doc;
    doc["command"] = "regimes";
    doc["problem"] = to_string(cfg.problem);
    doc["rho"] = nullable(r.rho);
    doc["J_needed"] = r.terms ? ordered_json(*r.terms) : ordered_json(nullptr);
    doc["recommendation"] = to_string(r.recommendation);
    doc["tol"] = r.tol;
    doc["sup_bound"] = nullable(r.sup_bound);
    doc["threshold"] = r.threshold;
    emit(opts.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return exit_ok;
}

} // namespace

int run(const std::string& command, const std::filesystem::path& config, const RunOptions& opts, std::ostream& out,
        std::ostream& err) {
    try {
        const RunConfig cfg = load_config(config);
        if (command == "solve") return cmd_solve(cfg, opts, out, err);
        if (command == "compare") return cmd_compare(cfg, opts, out);
        if (command == "verify") return cmd_verify(cfg, opts, out);
        if (command == "regimes") return cmd_regimes(cfg, opts, out);
        throw ValidationError("unknown command '" + command + "'");
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << " (achieved " << format_double(e.achieved()) << ")\n";
        return exit_convergence;
    } catch (const SolverError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return exit_convergence;
    } catch (const EstimationError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    }
}

} // namespace layerfield::cli
