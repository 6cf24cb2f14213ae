#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "layerfield/harmonic.hpp"

namespace layerfield {

/// Hard cap on ladder length; tolerances that need more terms fail.
inline constexpr std::size_t kMaxSeriesTerms = 1'000'000;

/// Two-layer half-plane: layer 1 is 0 < x < l, layer 2 is x > l.
struct PlanarLayerConfig {
    double l = 1.0;
    double k = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
    std::optional<double> lambda1;
    std::optional<double> lambda2;

    /// Builds and validates a config. When k is absent it is derived from
    /// the conductivities as (lambda1 / lambda2) (a2 / a1); when both are
    /// given they must agree to 1e-12.
    static PlanarLayerConfig make(double l, std::optional<double> k, double a1 = 1.0, double a2 = 1.0,
                                  std::optional<double> lambda1 = std::nullopt,
                                  std::optional<double> lambda2 = std::nullopt);

    void validate() const;
    /// Reflection ratio (1 - k) / (1 + k).
    double rho() const;
    /// ln|rho| / (2 l); throws when rho == 0.
    double robin_h() const;
};

/// Disk with a coupled shell: layer 1 is R < r < 1, layer 2 is r < R.
struct RadialLayerConfig {
    double R = 0.5;
    double k = 1.0;

    static RadialLayerConfig make(double R, double k);

    void validate() const;
    double rho() const;
    /// ln|rho| / (2 ln R); positive whenever 0 < |rho| < 1.
    double robin_h() const;
};

struct MaxTerms {
    std::size_t terms = 1;
};

/// Tail tolerance. sup_bound = 0 means "derive the bound from the field".
struct TailTol {
    double tol = 1e-10;
    double sup_bound = 0.0;
};

using Truncation = std::variant<MaxTerms, TailTol>;

struct TruncationInfo {
    std::size_t terms = 0;   ///< j = 0 .. terms-1 were summed
    double tail_bound = 0.0; ///< bound on the omitted remainder
    double sup_bound = 0.0;  ///< M used in the geometric tail estimate
};

enum class ProblemKind { halfplane_coupled, strip, disk_coupled, annulus };
enum class Region { layer1, layer2, outside };

std::string to_string(ProblemKind kind);
std::string to_string(Region region);
ProblemKind problem_kind_from_string(const std::string& name);
bool is_radial(ProblemKind kind) noexcept;

/// u = chi(layer 1) u1 + chi(layer 2) u2. Single-region problems (strip,
/// annulus) leave layer2 empty and never classify a point into it.
class LayeredSolution {
public:
    ProblemKind kind = ProblemKind::strip;
    std::function<Region(Point2)> classify;
    Evaluator layer1;
    Evaluator layer2;
    TruncationInfo truncation;

    /// Value of the evaluator owning p; throws ValidationError outside.
    double value(Point2 p) const;
    const Evaluator& evaluator(Region region) const;
};

/// Region predicates shared by the series, the approximators and the oracles.
std::function<Region(Point2)> planar_classifier(ProblemKind kind, double l);
std::function<Region(Point2)> radial_classifier(ProblemKind kind, double R);

/// Image series for the coupled half-plane.
LayeredSolution halfplane_coupled(const HalfPlaneField& field, const PlanarLayerConfig& cfg,
                                  const Truncation& trunc);

/// Image series for the strip 0 < x < l with u(0, y) = field(0, y), u(l, y) = 0.
LayeredSolution strip_dirichlet(const HalfPlaneField& field, double l, const Truncation& trunc);

/// Image series (radial scalings and Kelvin images) for the coupled disk.
LayeredSolution disk_coupled(const DiskField& field, const RadialLayerConfig& cfg,
                             const Truncation& trunc);

/// Image series for the annulus R < r < 1 with u = field on r = 1 and 0 on r = R.
/// Terms are paired before summation, so the constant mode contributes 0.
LayeredSolution annulus_dirichlet(const DiskField& field, double R, const Truncation& trunc);

/// Smallest J >= 1 with M |rho|^J / (1 - |rho|) <= tol.
std::size_t geometric_tail_terms(double rho, double tol, double sup_bound);

enum class Recommendation { series, asymptotic };
std::string to_string(Recommendation rec);

struct DiagnosticOptions {
    double tol = 1e-10;
    double sup_bound = 1.0;
    std::size_t threshold = 1000;
};

struct RegimeReport {
    double rho = 0.0;
    std::size_t terms_needed = 1;
    Recommendation recommendation = Recommendation::series;
};

RegimeReport convergence_diagnostic(double rho, const DiagnosticOptions& opts = {});
RegimeReport convergence_diagnostic(const PlanarLayerConfig& cfg, const DiagnosticOptions& opts = {});
RegimeReport convergence_diagnostic(const RadialLayerConfig& cfg, const DiagnosticOptions& opts = {});

/// M used by the weighted ladders: (1 + |rho|) times the field envelope
/// at the first image (x = 2l, resp. r = R^2).
double weighted_sup_bound(const HalfPlaneField& field, const PlanarLayerConfig& cfg);
double weighted_sup_bound(const DiskField& field, const RadialLayerConfig& cfg);

} // namespace layerfield
