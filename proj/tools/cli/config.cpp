#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "layerfield/error.hpp"
#include "layerfield/trace.hpp"

namespace layerfield::cli {

using nlohmann::json;

std::string to_string(Method m) {
    switch (m) {
    case Method::series: return "series";
    case Method::asymptotic: return "asymptotic";
    case Method::oracle: return "oracle";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    for (auto m : {Method::series, Method::asymptotic, Method::oracle})
        if (to_string(m) == name) return m;
    throw ValidationError("unknown method '" + name + "'");
}

double RunConfig::tail_tol() const {
    if (const auto* t = std::get_if<TailTol>(&truncation)) return t->tol;
    return TailTol{}.tol;
}

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be an object");
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    require_object(j, where);
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ValidationError("unknown field '" + key + "' in " + where);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(where + " must be finite");
    return v;
}

double positive(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v > 0.0)) throw ValidationError(where + " must be positive");
    return v;
}

std::size_t count(const json& j, const std::string& where, std::size_t min = 0) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min))
        throw ValidationError(where + " must be an integer >= " + std::to_string(min));
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) throw ValidationError(where + " must be a string");
    return j.get<std::string>();
}

std::pair<double, double> range(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw ValidationError(where + " must be a [lo, hi] pair");
    const double lo = number(j[0], where), hi = number(j[1], where);
    if (!(hi > lo)) throw ValidationError(where + " needs lo < hi");
    return {lo, hi};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void parse_geometry(const json& j, RunConfig& cfg) {
    switch (cfg.problem) {
    case ProblemKind::halfplane_coupled: allow_keys(j, "geometry", {"l", "k", "a1", "a2", "lambda1", "lambda2"}); break;
    case ProblemKind::strip: allow_keys(j, "geometry", {"l"}); break;
    case ProblemKind::disk_coupled: allow_keys(j, "geometry", {"R", "k"}); break;
    case ProblemKind::annulus: allow_keys(j, "geometry", {"R"}); break;
    }
    auto& g = cfg.geometry;
    const auto opt = [&](const char* key, std::optional<double>& out) {
        if (j.contains(key)) out = number(j[key], std::string("geometry.") + key);
    };
    opt("l", g.l);
    opt("k", g.k);
    opt("a1", g.a1);
    opt("a2", g.a2);
    opt("lambda1", g.lambda1);
    opt("lambda2", g.lambda2);
    opt("R", g.R);
    if (cfg.radial()) {
        if (!g.R) throw ValidationError("geometry.R is required for " + to_string(cfg.problem));
        if (cfg.problem == ProblemKind::disk_coupled && !g.k) throw ValidationError("geometry.k is required for disk_coupled");
    } else if (!g.l) {
        throw ValidationError("geometry.l is required for " + to_string(cfg.problem));
    }
    // Constructing the layer objects runs the full geometry validation.
    switch (cfg.problem) {
    case ProblemKind::halfplane_coupled: planar_layers(cfg); break;
    case ProblemKind::strip: strip_width(cfg); break;
    case ProblemKind::disk_coupled: radial_layers(cfg); break;
    case ProblemKind::annulus: annulus_radius(cfg); break;
    }
}

void parse_boundary(const json& j, RunConfig& cfg) {
    if (cfg.radial()) allow_keys(j, "boundary", {"modes", "samples", "max_mode"});
    else allow_keys(j, "boundary", {"modes", "sources", "samples"});
    const bool has_modes = j.contains("modes") || j.contains("sources");
    if (has_modes == j.contains("samples"))
        throw ValidationError("boundary needs exactly one of a mode list or a sample file");
    auto& b = cfg.boundary;
    if (j.contains("samples")) {
        b.samples = resolve(cfg.base_dir, text(j["samples"], "boundary.samples"));
        const BoundaryTrace trace = read_trace_csv(*b.samples);
        if (cfg.radial()) {
            const std::size_t max_mode = j.contains("max_mode") ? count(j["max_mode"], "boundary.max_mode") : 16;
            b.disk = disk_from_boundary(trace, max_mode);
        } else {
            check_trace_decay(trace);
            b.planar = poisson_field(trace);
        }
        return;
    }
    if (j.contains("max_mode")) throw ValidationError("boundary.max_mode applies to sample files only");
    b.from_modes = true;
    const json modes = j.value("modes", json::array());
    if (!modes.is_array()) throw ValidationError("boundary.modes must be an array");
    if (cfg.radial()) {
        std::vector<double> a, s;
        for (const auto& m : modes) {
            allow_keys(m, "boundary mode", {"n", "a", "b"});
            if (!m.contains("n")) throw ValidationError("disk mode needs n");
            const std::size_t n = count(m["n"], "mode n");
            const double an = m.contains("a") ? number(m["a"], "mode a") : 0.0;
            const double bn = m.contains("b") ? number(m["b"], "mode b") : 0.0;
            if (n == 0 && bn != 0.0) throw ValidationError("mode n = 0 has no sine part");
            if (a.size() < n + 1) a.resize(n + 1, 0.0);
            if (n >= 1 && s.size() < n) s.resize(n, 0.0);
            // Fourier convention: the constant term of the field is a_0 / 2.
            a[n] += an;
            if (n >= 1) s[n - 1] += bn;
        }
        if (a.empty()) a.push_back(0.0);
        b.disk = DiskField(std::move(a), std::move(s));
    } else {
        std::vector<PlanarMode> pm;
        for (const auto& m : modes) {
            allow_keys(m, "boundary mode", {"omega", "A", "phi"});
            if (!m.contains("omega")) throw ValidationError("planar mode needs omega");
            pm.push_back({m.contains("A") ? number(m["A"], "mode A") : 1.0, positive(m["omega"], "mode omega"),
                          m.contains("phi") ? number(m["phi"], "mode phi") : 0.0});
        }
        std::vector<BoundarySource> src;
        if (j.contains("sources")) {
            if (!j["sources"].is_array()) throw ValidationError("boundary.sources must be an array");
            for (const auto& q : j["sources"]) {
                allow_keys(q, "boundary source", {"t", "q"});
                if (!q.contains("t") || !q.contains("q")) throw ValidationError("boundary source needs t and q");
                src.push_back({number(q["t"], "source t"), number(q["q"], "source q")});
            }
        }
        b.planar = HalfPlaneField(std::move(pm), std::move(src));
    }
}

void parse_truncation(const json& j, RunConfig& cfg) {
    allow_keys(j, "truncation", {"J", "tol"});
    if (!j.contains("J") && !j.contains("tol")) throw ValidationError("truncation needs J or tol");
    if (j.contains("tol")) cfg.truncation = TailTol{positive(j["tol"], "truncation.tol")};
    if (j.contains("J")) {
        cfg.fixed_terms = count(j["J"], "truncation.J", 1);
        if (!j.contains("tol")) cfg.truncation = MaxTerms{*cfg.fixed_terms};
    }
}

void default_grid(RunConfig& cfg) {
    auto& g = cfg.grid;
    const auto& geo = cfg.geometry;
    switch (cfg.problem) {
    case ProblemKind::strip: g = {0.0, *geo.l, -1.0, 1.0, 21, 21}; break;
    case ProblemKind::halfplane_coupled: g = {0.0, *geo.l + 1.0, -1.0, 1.0, 21, 21}; break;
    case ProblemKind::disk_coupled: g = {0.0, 1.0, 0.0, 0.0, 21, 32}; break;
    case ProblemKind::annulus: g = {*geo.R, 1.0, 0.0, 0.0, 21, 32}; break;
    }
}

void parse_grid(const json& j, RunConfig& cfg) {
    auto& g = cfg.grid;
    if (cfg.radial()) {
        allow_keys(j, "grid", {"r", "nr", "ntheta"});
        if (j.contains("r")) std::tie(g.lo1, g.hi1) = range(j["r"], "grid.r");
        if (j.contains("nr")) g.n1 = count(j["nr"], "grid.nr", 2);
        if (j.contains("ntheta")) g.n2 = count(j["ntheta"], "grid.ntheta", 1);
    } else {
        allow_keys(j, "grid", {"x", "y", "nx", "ny"});
        if (j.contains("x")) std::tie(g.lo1, g.hi1) = range(j["x"], "grid.x");
        if (j.contains("y")) std::tie(g.lo2, g.hi2) = range(j["y"], "grid.y");
        if (j.contains("nx")) g.n1 = count(j["nx"], "grid.nx", 2);
        if (j.contains("ny")) g.n2 = count(j["ny"], "grid.ny", 2);
    }
}

void check_grid(const RunConfig& cfg) {
    const auto& g = cfg.grid;
    const double tol = 1e-12;
    switch (cfg.problem) {
    case ProblemKind::strip:
        if (g.lo1 < -tol || g.hi1 > *cfg.geometry.l * (1.0 + tol))
            throw ValidationError("grid.x must lie inside the strip [0, l]");
        break;
    case ProblemKind::halfplane_coupled:
        if (g.lo1 < -tol) throw ValidationError("grid.x must lie in x >= 0");
        break;
    case ProblemKind::disk_coupled:
        if (g.lo1 < 0.0 || g.hi1 > 1.0 + tol) throw ValidationError("grid.r must lie inside [0, 1]");
        break;
    case ProblemKind::annulus:
        if (g.lo1 < *cfg.geometry.R * (1.0 - tol) || g.hi1 > 1.0 + tol)
            throw ValidationError("grid.r must lie inside [R, 1]");
        break;
    }
}

} // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    allow_keys(doc, "config", {"problem", "geometry", "boundary", "method", "methods", "truncation", "grid",
                               "output", "tolerances", "sweep", "samples", "seed", "solution"});
    RunConfig cfg;
    cfg.base_dir = base_dir;
    if (!doc.contains("problem")) throw ValidationError("config needs a problem");
    cfg.problem = problem_kind_from_string(text(doc["problem"], "problem"));
    if (!doc.contains("geometry")) throw ValidationError("config needs a geometry");
    parse_geometry(doc["geometry"], cfg);
    if (!doc.contains("boundary")) throw ValidationError("config needs a boundary");
    parse_boundary(doc["boundary"], cfg);

    if (doc.contains("method") && doc.contains("methods")) throw ValidationError("give either method or methods");
    if (doc.contains("method")) cfg.methods = {method_from_string(text(doc["method"], "method"))};
    if (doc.contains("methods")) {
        if (!doc["methods"].is_array() || doc["methods"].empty()) throw ValidationError("methods must be a non-empty array");
        cfg.methods.clear();
        for (const auto& m : doc["methods"]) cfg.methods.push_back(method_from_string(text(m, "methods[]")));
    }
    if (doc.contains("truncation")) parse_truncation(doc["truncation"], cfg);

    default_grid(cfg);
    if (doc.contains("grid")) parse_grid(doc["grid"], cfg);
    check_grid(cfg);

    if (doc.contains("output")) {
        const auto& o = doc["output"];
        allow_keys(o, "output", {"path", "format", "table"});
        if (o.contains("format") && text(o["format"], "output.format") != "csv")
            throw ValidationError("output.format must be csv");
        if (o.contains("path")) cfg.output = resolve(base_dir, text(o["path"], "output.path"));
        if (o.contains("table")) cfg.table = resolve(base_dir, text(o["table"], "output.table"));
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        allow_keys(t, "tolerances", {"pde", "boundary", "value_jump", "flux_jump"});
        auto& tol = cfg.tolerances;
        if (t.contains("pde")) tol.pde = positive(t["pde"], "tolerances.pde");
        if (t.contains("boundary")) tol.boundary = positive(t["boundary"], "tolerances.boundary");
        if (t.contains("value_jump")) tol.value_jump = positive(t["value_jump"], "tolerances.value_jump");
        if (t.contains("flux_jump")) tol.flux_jump = positive(t["flux_jump"], "tolerances.flux_jump");
    }
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        allow_keys(s, "sweep", {"parameter", "values", "hold"});
        SweepSpec sw;
        sw.parameter = text(s.value("parameter", json(cfg.radial() ? "R" : "l")), "sweep.parameter");
        if (sw.parameter != (cfg.radial() ? "R" : "l"))
            throw ValidationError("sweep.parameter must be the layer thickness parameter (" +
                                  std::string(cfg.radial() ? "R" : "l") + ")");
        if (!s.contains("values") || !s["values"].is_array() || s["values"].size() < 2)
            throw ValidationError("sweep.values needs at least two entries");
        for (const auto& v : s["values"]) sw.values.push_back(positive(v, "sweep.values[]"));
        if (s.contains("hold")) sw.hold = text(s["hold"], "sweep.hold");
        if (sw.hold != "k" && sw.hold != "robin_h") throw ValidationError("sweep.hold must be k or robin_h");
        if (sw.hold == "robin_h" && (cfg.problem == ProblemKind::strip || cfg.problem == ProblemKind::annulus))
            throw ValidationError("sweep.hold = robin_h needs a coupled problem");
        cfg.sweep = std::move(sw);
    }
    if (doc.contains("samples")) {
        const auto& s = doc["samples"];
        allow_keys(s, "samples", {"interior", "boundary", "interface", "step"});
        if (s.contains("interior")) cfg.samples.interior = count(s["interior"], "samples.interior", 1);
        if (s.contains("boundary")) cfg.samples.boundary = count(s["boundary"], "samples.boundary", 1);
        if (s.contains("interface")) cfg.samples.interface = count(s["interface"], "samples.interface", 1);
        if (s.contains("step")) cfg.samples.step = positive(s["step"], "samples.step");
    }
    if (doc.contains("seed")) cfg.samples.seed = count(doc["seed"], "seed");
    if (doc.contains("solution")) {
        const auto& s = doc["solution"];
        if (s.is_string()) {
            const std::string v = s.get<std::string>();
            if (v == "method") cfg.solution = SolutionSource::method;
            else if (v == "model") cfg.solution = SolutionSource::model;
            else throw ValidationError("solution must be \"method\", \"model\" or {\"grid_csv\": path}");
        } else {
            allow_keys(s, "solution", {"grid_csv"});
            if (!s.contains("grid_csv")) throw ValidationError("solution object needs grid_csv");
            cfg.solution = SolutionSource::grid_csv;
            cfg.solution_grid = resolve(base_dir, text(s["grid_csv"], "solution.grid_csv"));
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(doc, path.parent_path());
}

PlanarLayerConfig planar_layers(const RunConfig& cfg) {
    const auto& g = cfg.geometry;
    return PlanarLayerConfig::make(*g.l, g.k, g.a1.value_or(1.0), g.a2.value_or(1.0), g.lambda1, g.lambda2);
}

RadialLayerConfig radial_layers(const RunConfig& cfg) { return RadialLayerConfig::make(*cfg.geometry.R, *cfg.geometry.k); }

double strip_width(const RunConfig& cfg) {
    const double l = *cfg.geometry.l;
    if (!(l > 0.0)) throw ValidationError("strip width l must be positive");
    return l;
}

double annulus_radius(const RunConfig& cfg) {
    const double R = *cfg.geometry.R;
    if (!(R > 0.0 && R < 1.0)) throw ValidationError("inner radius R must lie in (0, 1)");
    return R;
}

} // namespace layerfield::cli
