#include "mixext/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "mixext/bspline.hpp"

namespace mixext {

void ExtensionParams::validate(int dim) const {
    if (static_cast<int>(alpha.size()) != dim || m.dim() != dim) {
        throw std::invalid_argument("ExtensionParams: dimension mismatch");
    }
    for (double a : alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("ExtensionParams: need alpha > 0");
    }
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("ExtensionParams: need finite p >= 1");
    if (!(theta >= 1.0)) throw std::invalid_argument("ExtensionParams: need theta >= 1");
    if (K < 0) throw std::invalid_argument("ExtensionParams: need K >= 0");
    const MultiIndex l = l_alpha();
    if (!componentwise_le(l, m)) {
        throw std::invalid_argument("ExtensionParams: spline order m must dominate l(alpha)");
    }
}

std::shared_ptr<const TensorPolynomial> ProjectionCache::get_or_compute(
    const ScalarField& f, const MultiIndex& level, const MultiIndex& nu, const MultiIndex& l,
    int quad_order) {
    const auto key = std::make_pair(level, nu);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = store_.find(key);
        if (it != store_.end()) return it->second;
    }
    auto poly = std::make_shared<const TensorPolynomial>(
        project(f, cube_cell(level, nu), l, quad_order));
    std::lock_guard<std::mutex> lock(mutex_);
    return store_.emplace(key, std::move(poly)).first->second;
}

std::size_t ProjectionCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return store_.size();
}

TensorPolynomial local_projection(const ScalarField& f, const DomainDescriptor& D,
                                  const MultiIndex& kappa, const MultiIndex& nu,
                                  const MultiIndex& l, int quad_order) {
    if (!D.contains_open_box(dyadic_cube(kappa, nu))) {
        throw std::invalid_argument("local_projection: cube " + nu.str() + " at level " +
                                    kappa.str() + " is not inside the domain");
    }
    if (quad_order == 0) quad_order = default_quad_order(l);
    return project(f, cube_cell(kappa, nu), l, quad_order);
}

SplineExpansion quasi_interpolant(const ScalarField& f, const DomainDescriptor& D,
                                  const MultiIndex& kappa, const MultiIndex& l,
                                  const MultiIndex& m, int quad_order, ProjectionCache* cache) {
    const MTypeStructure& s = D.mtype();
    if (!componentwise_le(s.base_level, kappa)) {
        throw std::invalid_argument("quasi_interpolant: level below the base level");
    }
    if (quad_order == 0) quad_order = default_quad_order(l);
    ProjectionCache local;
    ProjectionCache& store = cache ? *cache : local;

    std::map<MultiIndex, PolyCoefficient> coeffs;
    for (const MultiIndex& nu : active_indices(D, kappa, m)) {
        const MultiIndex target = s.nu_map(kappa, nu);
        if (!D.contains_open_box(dyadic_cube(kappa, target))) {
            throw std::invalid_argument("quasi_interpolant: assigned cube " + target.str() +
                                        " at level " + kappa.str() + " is not inside the domain");
        }
        coeffs.emplace(nu, PolyCoefficient(store.get_or_compute(f, kappa, target, l, quad_order)));
    }
    return SplineExpansion(kappa, m, l, std::make_shared<DomainDescriptor>(D), std::move(coeffs));
}

SplineExpansion telescope_block(const ScalarField& f, const DomainDescriptor& D,
                                const MultiIndex& kappa_rel, const MultiIndex& l,
                                const MultiIndex& m, int quad_order, ProjectionCache* cache) {
    const MTypeStructure& s = D.mtype();
    if (!kappa_rel.all_nonneg()) {
        throw std::invalid_argument("telescope_block: relative level must be nonnegative");
    }
    if (quad_order == 0) quad_order = default_quad_order(l);
    ProjectionCache local;
    ProjectionCache& store = cache ? *cache : local;

    const int d = D.dim();
    const MultiIndex K = s.base_level + kappa_rel;
    const SubsetMask support = sigma(kappa_rel);
    const auto masks = SubsetMask::enumerate(d);

    std::map<MultiIndex, PolyCoefficient> coeffs;
    for (const MultiIndex& nu : active_indices(D, K, m)) {
        PolyCoefficient combo;
        for (const SubsetMask& eps : masks) {
            if (!eps.subset_of(support)) continue;
            const double sign = eps.sign();
            const MultiIndex K_eps = K - eps.chi();
            for (const EvenShiftTerm& term : even_shift_decompositions(nu, eps, m)) {
                const MultiIndex target = s.nu_map(K_eps, term.n);
                if (!D.contains_open_box(dyadic_cube(K_eps, target))) {
                    throw std::invalid_argument("telescope_block: assigned cube " + target.str() +
                                                " at level " + K_eps.str() +
                                                " is not inside the domain");
                }
                const double w = sign * refinement_weight(term.mu, eps, m);
                combo.add_term(w, store.get_or_compute(f, K_eps, target, l, quad_order));
            }
        }
        coeffs.emplace(nu, std::move(combo));
    }
    return SplineExpansion(K, m, l, std::make_shared<DomainDescriptor>(D), std::move(coeffs));
}

MultiLevelExpansion extend(const ScalarField& f, const DomainDescriptor& D,
                           const ExtensionParams& params, ProjectionCache* cache) {
    params.validate(D.dim());
    const MultiIndex degree = params.l_alpha() - MultiIndex::ones(D.dim());
    ProjectionCache local;
    ProjectionCache& store = cache ? *cache : local;

    std::vector<SplineExpansion> blocks;
    IndexBox levels{MultiIndex::zeros(D.dim()), MultiIndex(D.dim(), params.K)};
    levels.for_each([&](const MultiIndex& kappa_rel) {
        blocks.push_back(
            telescope_block(f, D, kappa_rel, degree, params.m, params.quad_order, &store));
    });
    return MultiLevelExpansion(std::move(blocks));
}

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

double expansion_lq_norm(const SplineExpansion& e, const MultiIndex& lambda, double q,
                         int x_res_log2) {
    const ScalarField field = [&e, &lambda](std::span<const double> x) {
        return e.evaluate(lambda, x);
    };
    return lp_norm_box(field, e.support_bounding_box(), q, x_res_log2);
}

}  // namespace

std::vector<DiagnosticsRow> operator_diagnostics(const ScalarField& f, const DomainDescriptor& D,
                                                 const ExtensionParams& params,
                                                 const MultiIndex& lambda,
                                                 const OperatorDiagnosticsOptions& opts) {
    params.validate(D.dim());
    const int d = D.dim();
    if (lambda.dim() != d || !lambda.all_nonneg() || !componentwise_le(lambda, params.m)) {
        throw std::invalid_argument("operator_diagnostics: need 0 <= lambda <= m");
    }
    const double q = opts.q > 0.0 ? opts.q : params.p;
    const double s = opts.s > 0.0 ? opts.s : params.p;
    const MultiIndex l = params.l_alpha();
    const MultiIndex degree = l - MultiIndex::ones(d);

    double c15 = opts.c15;
    if (!(c15 > 0.0) && opts.jackson) {
        // Smallest box constant the hull cells fit in, measured on the domain,
        // capped so that the modulus arguments c15 2^{-kappa_j} stay within
        // the per-axis extent for kappa_j >= 1. Beyond that extent the
        // averaged modulus saturates and the ratio table stops being
        // comparable across levels.
        const MTypeReport rep = validate_mtype(D, params.m, opts.validate_levels);
        c15 = 1.0;
        for (const double g : rep.gamma1) c15 = std::max(c15, g);
        const Box& bb = D.bounding();
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const double width = bb.hi[k] - bb.lo[k];
            c15 = std::min(c15, 2.0 * width / static_cast<double>(l[j]));
        }
    }

    const double norm_f_s = lp_norm(f, D, s, opts.x_res_log2);
    ProjectionCache cache;
    std::vector<DiagnosticsRow> rows;

    IndexBox levels{MultiIndex::zeros(d), MultiIndex(d, params.K)};
    levels.for_each([&](const MultiIndex& kappa_rel) {
        DiagnosticsRow row;
        row.kappa = kappa_rel;
        const MultiIndex K = D.mtype().base_level + kappa_rel;

        // Stability of the plain quasi-interpolant at this level.
        const SplineExpansion ek =
            quasi_interpolant(f, D, K, degree, params.m, params.quad_order, &cache);
        const double stab_num = expansion_lq_norm(ek, lambda, q, opts.x_res_log2);
        double scale = 0.0;
        for (int j = 0; j < d; ++j) {
            scale += static_cast<double>(kappa_rel[j]) *
                     (static_cast<double>(lambda[j]) + positive_part(1.0 / s - 1.0 / q));
        }
        row.stability_ratio = stab_num / (std::exp2(scale) * norm_f_s);

        // Decay of the telescoping block against the averaged modulus.
        if (opts.jackson && !sigma(kappa_rel).is_empty()) {
            const SplineExpansion block =
                telescope_block(f, D, kappa_rel, degree, params.m, params.quad_order, &cache);
            const double block_norm = expansion_lq_norm(block, lambda, q, opts.x_res_log2);
            ModulusQuery mq;
            mq.l = l;
            mq.J = sigma(kappa_rel);
            mq.p = params.p;
            mq.xi_nodes = opts.xi_nodes;
            mq.x_res_log2 = opts.x_res_log2;
            for (int j = 0; j < d; ++j) {
                if (mq.J.contains(j)) {
                    mq.t[static_cast<std::size_t>(j)] =
                        c15 * std::ldexp(1.0, -static_cast<int>(kappa_rel[j]));
                }
            }
            const double modulus = omega_avg(f, D, mq);
            if (modulus > 0.0) {
                double jscale = 0.0;
                for (int j = 0; j < d; ++j) {
                    jscale += static_cast<double>(kappa_rel[j]) *
                              (static_cast<double>(lambda[j]) +
                               positive_part(1.0 / params.p - 1.0 / q));
                }
                row.jackson_applicable = true;
                row.jackson_ratio = block_norm / (std::exp2(jscale) * modulus);
            }
        }
        rows.push_back(std::move(row));
    });
    return rows;
}

}  // namespace mixext
