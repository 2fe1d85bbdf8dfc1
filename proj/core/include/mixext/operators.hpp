// Approximation and extension machinery: local projections on dyadic cubes,
// quasi-interpolants, the inclusion-exclusion telescoping blocks computed in
// closed coefficient form, the truncated extension operator, and the
// diagnostic ratios documenting its bounds.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "mixext/moduli.hpp"
#include "mixext/spline_expansion.hpp"

namespace mixext {

/// Parameters of the extension construction. The difference order l is
/// derived from alpha; the expansion degree used throughout is l - 1 per
/// axis, and the spline order m must dominate l.
struct ExtensionParams {
    std::vector<double> alpha;
    double p = 2.0;
    double theta = 2.0;  // infinity selects the sup-weighted norm
    MultiIndex m;
    int K = 3;            // truncation: levels kappa <= K componentwise
    int quad_order = 0;   // 0 = automatic

    MultiIndex l_alpha() const { return difference_order(alpha); }
    void validate(int dim) const;
};

/// Shared store of local projections keyed by (absolute level, cube index).
/// Valid for a fixed integrand, degree and quadrature order; create one per
/// assembly run. Lookups are serialized, so concurrent coefficient assembly
/// may share one cache.
class ProjectionCache {
public:
    std::shared_ptr<const TensorPolynomial> get_or_compute(
        const ScalarField& f, const MultiIndex& level, const MultiIndex& nu, const MultiIndex& l,
        int quad_order);

    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<MultiIndex, MultiIndex>, std::shared_ptr<const TensorPolynomial>> store_;
};

/// Projection of f onto the degree-l space over the dyadic cube at (kappa,
/// nu). The cube must lie inside the domain.
TensorPolynomial local_projection(const ScalarField& f, const DomainDescriptor& D,
                                  const MultiIndex& kappa, const MultiIndex& nu,
                                  const MultiIndex& l, int quad_order = 0);

/// Quasi-interpolant at absolute level kappa: the expansion whose coefficient
/// at nu is the local projection over the assigned interior cube.
SplineExpansion quasi_interpolant(const ScalarField& f, const DomainDescriptor& D,
                                  const MultiIndex& kappa, const MultiIndex& l,
                                  const MultiIndex& m, int quad_order = 0,
                                  ProjectionCache* cache = nullptr);

/// Telescoping block at relative level kappa: coefficients combine, with
/// alternating signs over the axis subsets of kappa and refinement weights
/// over the even-shift tuples, the projections over the assigned cubes one
/// level down on each chosen axis. The blocks sum to the quasi-interpolant
/// over rectangles of levels.
SplineExpansion telescope_block(const ScalarField& f, const DomainDescriptor& D,
                                const MultiIndex& kappa_rel, const MultiIndex& l,
                                const MultiIndex& m, int quad_order = 0,
                                ProjectionCache* cache = nullptr);

/// Truncated extension: the sum of all telescoping blocks with relative
/// level <= K componentwise, defined on all of R^d and restricting on the
/// domain to the top-level quasi-interpolant.
MultiLevelExpansion extend(const ScalarField& f, const DomainDescriptor& D,
                           const ExtensionParams& params, ProjectionCache* cache = nullptr);

/// Per-level diagnostic ratios:
///   jackson_ratio   = |D^lambda block_kappa|_Lq(R^d) /
///                     (2^{(kappa, lambda + (1/p - 1/q)_+ e)} *
///                      averaged modulus of f at steps c15 2^{-kappa}),
///   stability_ratio = |D^lambda E_{kappa}|_Lq(R^d) /
///                     (2^{(kappa, lambda + (1/s - 1/q)_+ e)} |f|_Ls(D)).
/// The block ratio is undefined at kappa = 0 and whenever the modulus
/// vanishes; such rows are flagged not-applicable.
struct DiagnosticsRow {
    MultiIndex kappa;
    bool jackson_applicable = false;
    double jackson_ratio = 0.0;
    double stability_ratio = 0.0;
};

struct OperatorDiagnosticsOptions {
    double q = 0.0;    // 0 = use params.p
    double s = 0.0;    // 0 = use params.p
    double c15 = 0.0;  // 0 = measure from the domain validator
    int x_res_log2 = 7;
    int xi_nodes = 8;
    int validate_levels = 2;  // level cap used when measuring c15
    bool jackson = true;      // skip the block/modulus column when false
};

std::vector<DiagnosticsRow> operator_diagnostics(const ScalarField& f, const DomainDescriptor& D,
                                                 const ExtensionParams& params,
                                                 const MultiIndex& lambda,
                                                 const OperatorDiagnosticsOptions& opts = {});

}  // namespace mixext
