// Batch harness for the extension machinery: verification suites,
// convergence studies, grid evaluation of extensions, norm computation, and
// domain validation. Emits CSV with the full configuration echoed in a
// comment line; identical configurations produce bit-identical output.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "mixext/bspline.hpp"
#include "mixext/csv.hpp"
#include "mixext/moduli.hpp"
#include "mixext/operators.hpp"

using namespace mixext;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::string command;
    std::string domain = "cube2d";
    std::string domain_file;
    std::string m_spec = "2,2";
    std::string alpha_spec = "1.5,1.5";
    double p = 2.0;
    std::string theta_spec = "2";
    int K = 2;
    int Kt = 4;
    int levels = 3;
    int kmax = 5;
    int grid = 32;
    int xres = 6;
    int xi_nodes = 8;
    std::string function = "sinpi";
    std::string lambda_spec;
    std::string out_path;
    unsigned long long seed = 12345;
    std::vector<std::string> tol_overrides;

    std::vector<std::pair<std::string, std::string>> echo() const {
        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("domain", domain_file.empty() ? domain : "file:" + domain_file);
        kv.emplace_back("m", m_spec);
        kv.emplace_back("alpha", alpha_spec);
        kv.emplace_back("p", format_number(p));
        kv.emplace_back("theta", theta_spec);
        kv.emplace_back("K", std::to_string(K));
        kv.emplace_back("Kt", std::to_string(Kt));
        kv.emplace_back("levels", std::to_string(levels));
        kv.emplace_back("kmax", std::to_string(kmax));
        kv.emplace_back("grid", std::to_string(grid));
        kv.emplace_back("xres", std::to_string(xres));
        kv.emplace_back("xi_nodes", std::to_string(xi_nodes));
        kv.emplace_back("f", function);
        if (!lambda_spec.empty()) kv.emplace_back("lambda", lambda_spec);
        kv.emplace_back("seed", std::to_string(seed));
        for (const std::string& t : tol_overrides) kv.emplace_back("tol", t);
        return kv;
    }
};

MultiIndex parse_multiindex(const std::string& spec) {
    std::vector<std::int64_t> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stoll(tok));
    if (vals.empty() || vals.size() > kMaxDim) {
        throw CLI::ValidationError("bad index vector: " + spec);
    }
    MultiIndex v(static_cast<int>(vals.size()), 0);
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
    return v;
}

std::vector<double> parse_reals(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.empty() || vals.size() > kMaxDim) {
        throw CLI::ValidationError("bad real vector: " + spec);
    }
    return vals;
}

double parse_theta(const std::string& spec) {
    if (spec == "inf" || spec == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(spec);
}

DomainDescriptor load_domain(const RunConfig& cfg) {
    if (!cfg.domain_file.empty()) {
        std::ifstream in(cfg.domain_file);
        if (!in) throw CLI::ValidationError("cannot open domain file: " + cfg.domain_file);
        // Box-list domains get the clamp assignment by default; validation
        // decides whether it is usable.
        DomainDescriptor d = DomainDescriptor::parse(in, cfg.domain_file);
        MTypeStructure maps;
        maps.base_level = MultiIndex::zeros(d.dim());
        maps.nu_map = [](const MultiIndex&, const MultiIndex& nu) { return nu.clamped_nonneg(); };
        maps.n_map = [](const MultiIndex&, const MultiIndex& nu) { return nu.clamped_nonneg(); };
        return d.with_mtype(std::move(maps));
    }
    return DomainDescriptor::named(cfg.domain);
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw CLI::ValidationError("cannot open output file: " + path);
            os = &file;
        }
    }
};

double tolerance_for(const RunConfig& cfg, const std::string& check, double fallback) {
    for (const std::string& ov : cfg.tol_overrides) {
        const auto eq = ov.find('=');
        if (eq != std::string::npos && ov.substr(0, eq) == check) {
            return std::stod(ov.substr(eq + 1));
        }
    }
    return fallback;
}

// ---------------------------------------------------------------- verify --

int run_verify(const RunConfig& cfg) {
    const DomainDescriptor D = load_domain(cfg);
    const int d = D.dim();
    const MultiIndex m = parse_multiindex(cfg.m_spec);
    if (m.dim() != d) throw CLI::ValidationError("--m dimension does not match the domain");
    const int levels = cfg.levels;
    std::mt19937_64 rng(cfg.seed);

    Output out(cfg.out_path);
    CsvWriter csv(*out.os);
    csv.comment_config("mixext", "verify", cfg.echo());
    csv.header({"check", "parameters", "max_error", "tolerance", "pass"});

    bool all_pass = true;
    const auto emit = [&](const std::string& check, const std::string& params, double err,
                          double tol) {
        const bool ok = err <= tol;
        all_pass = all_pass && ok;
        csv.row({check, params, format_number(err), format_number(tol), ok ? "1" : "0"});
    };

    // Half-scale reconstruction of each univariate spline.
    {
        double worst = 0.0;
        for (int mm = 0; mm <= static_cast<int>(m.max()); ++mm) {
            const auto a = refinement_coeffs(mm);
            for (int i = 0; i < 1000; ++i) {
                const double x = -1.0 + i * (mm + 3.0) / 999.0;
                double rhs = 0.0;
                for (int mu = 0; mu <= mm + 1; ++mu) {
                    rhs += a[static_cast<std::size_t>(mu)] * eval_psi(mm, 0, 2.0 * x - mu);
                }
                worst = std::max(worst, std::abs(eval_psi(mm, 0, x) - rhs));
            }
        }
        emit("two_scale", "m<=" + std::to_string(m.max()), worst,
             tolerance_for(cfg, "two_scale", 1e-12));
    }

    // Parity sums of the refinement weights and of their products.
    {
        double worst = 0.0;
        for (int mm = 0; mm <= static_cast<int>(m.max()); ++mm) {
            const auto a = refinement_coeffs(mm);
            double even = 0.0, odd = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) (i % 2 ? odd : even) += a[i];
            worst = std::max({worst, std::abs(even - 1.0), std::abs(odd - 1.0)});
        }
        std::uniform_int_distribution<std::int64_t> nu_dist(-6, 6);
        for (int trial = 0; trial < 50; ++trial) {
            MultiIndex nu(d, 0);
            for (int j = 0; j < d; ++j) nu[j] = nu_dist(rng);
            for (const SubsetMask& eps : SubsetMask::enumerate(d)) {
                double sum = 0.0;
                for (const EvenShiftTerm& t : even_shift_decompositions(nu, eps, m)) {
                    sum += refinement_weight(t.mu, eps, m);
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        emit("coefficient_sum", "m=" + cfg.m_spec, worst,
             tolerance_for(cfg, "coefficient_sum", 0.0));
    }

    // Pointwise partition of unity over the domain.
    {
        double worst = 0.0;
        std::vector<std::uniform_real_distribution<double>> dist;
        for (int j = 0; j < d; ++j) {
            dist.emplace_back(D.bounding().lo[static_cast<std::size_t>(j)],
                              D.bounding().hi[static_cast<std::size_t>(j)]);
        }
        for (int lev = 0; lev <= levels; ++lev) {
            const MultiIndex kappa(d, lev);
            const auto active = active_indices(D, kappa, m);
            int accepted = 0;
            while (accepted < 400) {
                std::array<double, kMaxDim> x{};
                for (int j = 0; j < d; ++j) {
                    x[static_cast<std::size_t>(j)] = dist[static_cast<std::size_t>(j)](rng);
                }
                const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
                if (!D.contains(xs)) continue;
                ++accepted;
                double sum = 0.0;
                for (const MultiIndex& nu : active) {
                    sum += eval_g(kappa, nu, m, MultiIndex::zeros(d), xs);
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        emit("partition_of_unity", "levels<=" + std::to_string(levels), worst,
             tolerance_for(cfg, "partition_of_unity", 1e-12));
    }

    // Local projections reproduce their own polynomial space.
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const MultiIndex degree(d, 2);
        std::size_t tensor = 1;
        for (int j = 0; j < d; ++j) tensor *= 3;
        for (int trial = 0; trial < 10; ++trial) {
            Cell cell;
            cell.dim = d;
            for (int j = 0; j < d; ++j) {
                cell.x0[static_cast<std::size_t>(j)] = cdist(rng);
                cell.delta[static_cast<std::size_t>(j)] = 0.25 + 0.5 * std::abs(cdist(rng));
            }
            std::vector<double> coeffs(tensor);
            for (double& c : coeffs) c = cdist(rng);
            const TensorPolynomial src(degree, cell, coeffs);
            const TensorPolynomial back =
                project([&src](std::span<const double> x) { return src(x); }, cell, degree, 5);
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                worst = std::max(worst, std::abs(back.coeffs()[i] - coeffs[i]));
            }
        }
        emit("projection_reproduction", "degree=2", worst,
             tolerance_for(cfg, "projection_reproduction", 1e-10));
    }

    // Refinement leaves the expansion unchanged on the domain.
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const MultiIndex degree(d, 1);
        std::size_t tensor = 1;
        for (int j = 0; j < d; ++j) tensor *= 2;
        const MultiIndex level(d, std::max(1, levels - 1));
        auto Dp = std::make_shared<DomainDescriptor>(D);
        for (const SubsetMask& eps : SubsetMask::enumerate(d)) {
            const MultiIndex source = level - eps.chi();
            std::map<MultiIndex, PolyCoefficient> coeffs;
            for (const MultiIndex& nu : active_indices(D, source, m)) {
                std::vector<double> c(tensor);
                for (double& v : c) v = cdist(rng);
                coeffs.emplace(nu, PolyCoefficient(std::make_shared<TensorPolynomial>(
                                       degree, cube_cell(source, nu), std::move(c))));
            }
            const SplineExpansion f(source, m, degree, Dp, std::move(coeffs));
            const SplineExpansion g = f.refined_by(eps);
            std::vector<std::uniform_real_distribution<double>> dist;
            for (int j = 0; j < d; ++j) {
                dist.emplace_back(D.bounding().lo[static_cast<std::size_t>(j)],
                                  D.bounding().hi[static_cast<std::size_t>(j)]);
            }
            int accepted = 0;
            while (accepted < 200) {
                std::array<double, kMaxDim> x{};
                for (int j = 0; j < d; ++j) {
                    x[static_cast<std::size_t>(j)] = dist[static_cast<std::size_t>(j)](rng);
                }
                const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
                if (!D.contains(xs)) continue;
                ++accepted;
                worst = std::max(worst, std::abs(f(xs) - g(xs)));
            }
        }
        emit("restriction_identity", "level=" + std::to_string(level.max()), worst,
             tolerance_for(cfg, "restriction_identity", 1e-10));
    }

    // Rectangle sums of telescoping blocks equal the top quasi-interpolant.
    {
        double worst = 0.0;
        const auto f = [](std::span<const double> x) {
            double v = 1.0;
            for (const double c : x) v *= std::sin(std::numbers::pi * c);
            return v;
        };
        const MultiIndex degree(d, 1);
        const MultiIndex mm = componentwise_le(MultiIndex(d, 2), m) ? m : MultiIndex(d, 2);
        ProjectionCache cache;
        const int kcap = std::min(levels, 2);
        std::vector<SplineExpansion> blocks;
        IndexBox box{MultiIndex::zeros(d), MultiIndex(d, kcap)};
        box.for_each([&](const MultiIndex& kappa) {
            blocks.push_back(telescope_block(f, D, kappa, degree, mm, 0, &cache));
        });
        const MultiLevelExpansion sum(std::move(blocks));
        const SplineExpansion top =
            quasi_interpolant(f, D, MultiIndex(d, kcap), degree, mm, 0, &cache);
        std::vector<std::uniform_real_distribution<double>> dist;
        for (int j = 0; j < d; ++j) {
            dist.emplace_back(D.bounding().lo[static_cast<std::size_t>(j)],
                              D.bounding().hi[static_cast<std::size_t>(j)]);
        }
        int accepted = 0;
        while (accepted < 200) {
            std::array<double, kMaxDim> x{};
            for (int j = 0; j < d; ++j) {
                x[static_cast<std::size_t>(j)] = dist[static_cast<std::size_t>(j)](rng);
            }
            const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
            if (!D.contains(xs)) continue;
            ++accepted;
            worst = std::max(worst, std::abs(sum(xs) - top(xs)));
        }
        emit("telescoping", "K<=" + std::to_string(kcap), worst,
             tolerance_for(cfg, "telescoping", 1e-9));
    }

    // Cube-assignment validation.
    {
        const MTypeReport rep = validate_mtype(D, m, levels);
        emit("mtype_validation", "K<=" + std::to_string(levels), rep.pass ? 0.0 : 1.0,
             tolerance_for(cfg, "mtype_validation", 0.0));
        if (!rep.pass) std::cerr << "mixext verify: " << rep.first_failure << '\n';
    }

    return all_pass ? 0 : kExitCheckFailure;
}

// -------------------------------------------------------------- converge --

int run_converge(const RunConfig& cfg) {
    const DomainDescriptor D = load_domain(cfg);
    const int d = D.dim();
    const std::vector<double> alpha = parse_reals(cfg.alpha_spec);
    if (static_cast<int>(alpha.size()) != d) {
        throw CLI::ValidationError("--alpha dimension does not match the domain");
    }
    const MultiIndex l = difference_order(alpha);
    const MultiIndex degree = l - MultiIndex::ones(d);
    MultiIndex m = parse_multiindex(cfg.m_spec);
    if (m.dim() != d || !componentwise_le(l, m)) m = l;

    const auto registry = standard_registry(d);
    const TestFunction& tf = find_function(registry, cfg.function);
    const ScalarField f = tf.field();

    Output out(cfg.out_path);
    CsvWriter csv(*out.os);
    csv.comment_config("mixext", "converge", cfg.echo());
    csv.header({"level", "l2_error", "observed_order"});

    double prev = 0.0;
    bool ok = true;
    for (int k = std::max(0, cfg.kmax - 3); k <= cfg.kmax; ++k) {
        const SplineExpansion e = quasi_interpolant(f, D, MultiIndex(d, k), degree, m);
        const ScalarField err = [&](std::span<const double> x) { return f(x) - e(x); };
        const double v = lp_norm(err, D, cfg.p, std::max(cfg.xres, k + 3));
        std::string order;
        if (prev > 0.0 && v > 0.0) order = format_number(std::log2(prev / v));
        csv.row({std::to_string(k), format_number(v), order});
        if (!std::isfinite(v)) ok = false;
        prev = v;
    }
    return ok ? 0 : kExitCheckFailure;
}

// ---------------------------------------------------------------- extend --

int run_extend(const RunConfig& cfg) {
    const DomainDescriptor D = load_domain(cfg);
    const int d = D.dim();
    ExtensionParams params;
    params.alpha = parse_reals(cfg.alpha_spec);
    if (static_cast<int>(params.alpha.size()) != d) {
        throw CLI::ValidationError("--alpha dimension does not match the domain");
    }
    params.p = cfg.p;
    params.theta = parse_theta(cfg.theta_spec);
    params.K = cfg.K;
    const MultiIndex m = parse_multiindex(cfg.m_spec);
    const MultiIndex l = difference_order(params.alpha);
    params.m = (m.dim() == d && componentwise_le(l, m)) ? m : l;
    params.validate(d);

    const auto registry = standard_registry(d);
    const TestFunction& tf = find_function(registry, cfg.function);
    const MultiLevelExpansion ext = extend(tf.field(), D, params);
    const MultiIndex lambda =
        cfg.lambda_spec.empty() ? MultiIndex::zeros(d) : parse_multiindex(cfg.lambda_spec);

    Output out(cfg.out_path);
    CsvWriter csv(*out.os);
    csv.comment_config("mixext", "extend", cfg.echo());
    std::vector<std::string> cols;
    for (int j = 0; j < d; ++j) cols.push_back("x" + std::to_string(j + 1));
    cols.push_back("value");
    csv.header(cols);

    const Box bb = ext.support_bounding_box();
    std::array<std::int64_t, kMaxDim> idx{};
    bool ok = true;
    while (true) {
        std::array<double, kMaxDim> x{};
        std::vector<std::string> row;
        for (int j = 0; j < d; ++j) {
            const auto kj = static_cast<std::size_t>(j);
            x[kj] = bb.lo[kj] +
                    (bb.hi[kj] - bb.lo[kj]) * (static_cast<double>(idx[kj]) + 0.5) / cfg.grid;
            row.push_back(format_number(x[kj]));
        }
        const double v =
            ext.evaluate(lambda, std::span<const double>(x.data(), static_cast<std::size_t>(d)));
        if (!std::isfinite(v)) ok = false;
        row.push_back(format_number(v));
        csv.row(row);
        int j = d - 1;
        while (j >= 0) {
            const auto kj = static_cast<std::size_t>(j);
            if (idx[kj] + 1 < cfg.grid) {
                ++idx[kj];
                break;
            }
            idx[kj] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return ok ? 0 : kExitCheckFailure;
}

// ----------------------------------------------------------------- norms --

int run_norms(const RunConfig& cfg) {
    const DomainDescriptor D = load_domain(cfg);
    const int d = D.dim();
    ExtensionParams params;
    params.alpha = parse_reals(cfg.alpha_spec);
    if (static_cast<int>(params.alpha.size()) != d) {
        throw CLI::ValidationError("--alpha dimension does not match the domain");
    }
    params.p = cfg.p;
    params.theta = parse_theta(cfg.theta_spec);
    params.K = cfg.K;
    const MultiIndex m = parse_multiindex(cfg.m_spec);
    const MultiIndex l = difference_order(params.alpha);
    params.m = (m.dim() == d && componentwise_le(l, m)) ? m : l;
    params.validate(d);

    const auto registry = standard_registry(d);
    const TestFunction& tf = find_function(registry, cfg.function);
    const ScalarField f = tf.field();

    BesovGrid grid;
    grid.k_max = cfg.Kt;
    NormResolution res;
    res.x_res_log2 = cfg.xres;
    res.xi_nodes = cfg.xi_nodes;

    Output out(cfg.out_path);
    CsvWriter csv(*out.os);
    csv.comment_config("mixext", "norms", cfg.echo());
    csv.header({"K", "norm_f_domain", "norm_ext_box", "ratio"});

    const double base = besov_prime_norm(f, D, params.alpha, params.p, params.theta, grid, res);

    // Blocks accumulate across K, so assemble once at the largest truncation.
    ProjectionCache cache;
    const MultiIndex degree = l - MultiIndex::ones(d);
    std::map<MultiIndex, SplineExpansion> blocks;
    IndexBox levels{MultiIndex::zeros(d), MultiIndex(d, params.K)};
    levels.for_each([&](const MultiIndex& kappa) {
        blocks.emplace(kappa,
                       telescope_block(f, D, kappa, degree, params.m, params.quad_order, &cache));
    });

    bool ok = true;
    for (int k = 0; k <= params.K; ++k) {
        std::vector<SplineExpansion> part;
        for (const auto& [kappa, block] : blocks) {
            if (kappa.max() <= k) part.push_back(block);
        }
        const MultiLevelExpansion ext(std::move(part));
        const Box bb = ext.support_bounding_box();
        const auto ext_domain = DomainDescriptor::from_boxes("enclosing-box", {bb});
        const ScalarField ext_field = memoized_on_lattice(
            [&ext](std::span<const double> x) { return ext(x); }, res.x_res_log2);
        const double norm_ext = besov_prime_norm(ext_field, ext_domain, params.alpha, params.p,
                                                 params.theta, grid, res);
        const double ratio = base > 0.0 ? norm_ext / base : 0.0;
        if (!std::isfinite(norm_ext)) ok = false;
        csv.row({std::to_string(k), format_number(base), format_number(norm_ext),
                 format_number(ratio)});
    }
    return ok ? 0 : kExitCheckFailure;
}

// ------------------------------------------------------- validate-domain --

int run_validate(const RunConfig& cfg) {
    const DomainDescriptor D = load_domain(cfg);
    const MultiIndex m = parse_multiindex(cfg.m_spec);
    if (m.dim() != D.dim()) throw CLI::ValidationError("--m dimension does not match the domain");

    Output out(cfg.out_path);
    CsvWriter csv(*out.os);
    csv.comment_config("mixext", "validate-domain", cfg.echo());
    csv.header({"levels", "tuples_checked", "pass", "gamma0", "gamma1", "first_failure"});

    const MTypeReport rep = validate_mtype(D, m, cfg.levels);
    std::string g0, g1;
    for (std::size_t j = 0; j < rep.gamma0.size(); ++j) {
        if (j) {
            g0 += ';';
            g1 += ';';
        }
        g0 += format_number(rep.gamma0[j]);
        g1 += format_number(rep.gamma1[j]);
    }
    csv.row({std::to_string(cfg.levels), std::to_string(rep.tuples_checked),
             rep.pass ? "1" : "0", g0, g1, rep.first_failure});
    return rep.pass ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-smoothness spline extension toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    const auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--domain", cfg.domain, "built-in domain name");
        sub->add_option("--domain-file", cfg.domain_file, "box-list domain file");
        sub->add_option("--m", cfg.m_spec, "spline order per axis, comma separated");
        sub->add_option("--alpha", cfg.alpha_spec, "smoothness vector, comma separated");
        sub->add_option("--p", cfg.p, "integral exponent");
        sub->add_option("--theta", cfg.theta_spec, "summation exponent or 'inf'");
        sub->add_option("--K", cfg.K, "extension truncation level");
        sub->add_option("--Kt", cfg.Kt, "finest dyadic step 2^-Kt in norm integrals");
        sub->add_option("--levels", cfg.levels, "level cap for verification");
        sub->add_option("--kmax", cfg.kmax, "finest level in convergence studies");
        sub->add_option("--grid", cfg.grid, "output samples per axis");
        sub->add_option("--xres", cfg.xres, "spatial grid resolution exponent");
        sub->add_option("--xi-nodes", cfg.xi_nodes, "step quadrature nodes per axis");
        sub->add_option("--f", cfg.function, "test function name");
        sub->add_option("--lambda", cfg.lambda_spec, "derivative order per axis");
        sub->add_option("--out", cfg.out_path, "output CSV path (default stdout)");
        sub->add_option("--seed", cfg.seed, "random seed for sampled checks");
        sub->add_option("--tol", cfg.tol_overrides, "tolerance override check=value");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the identity verification suites");
    CLI::App* converge = app.add_subcommand("converge", "interpolation error versus level");
    CLI::App* extend_cmd = app.add_subcommand("extend", "evaluate the extension on a grid");
    CLI::App* norms = app.add_subcommand("norms", "mixed-smoothness norms per truncation");
    CLI::App* validate = app.add_subcommand("validate-domain", "check the cube assignments");
    for (CLI::App* sub : {verify, converge, extend_cmd, norms, validate}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;  // help exits cleanly, errors are usage
    }

    try {
        if (app.got_subcommand(verify)) return run_verify(cfg);
        if (app.got_subcommand(converge)) return run_converge(cfg);
        if (app.got_subcommand(extend_cmd)) return run_extend(cfg);
        if (app.got_subcommand(norms)) return run_norms(cfg);
        if (app.got_subcommand(validate)) return run_validate(cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "mixext: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mixext: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "mixext: " << e.what() << '\n';
        return kExitCheckFailure;
    }
    return kExitUsage;
}
