#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "mixext/operators.hpp"

using namespace mixext;

namespace {

constexpr double kPi = std::numbers::pi;

DomainDescriptor cube2() { return DomainDescriptor::named("cube2d"); }

std::vector<std::array<double, 2>> interior_samples(const DomainDescriptor& D, int count,
                                                    std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(D.bounding().lo[0], D.bounding().hi[0]);
    std::uniform_real_distribution<double> uy(D.bounding().lo[1], D.bounding().hi[1]);
    std::vector<std::array<double, 2>> pts;
    while (static_cast<int>(pts.size()) < count) {
        const std::array<double, 2> x{ux(rng), uy(rng)};
        if (D.contains(std::span<const double>(x.data(), 2))) pts.push_back(x);
    }
    return pts;
}

double sample_max_diff(const DomainDescriptor& D, const std::function<double(std::span<const double>)>& a,
                       const std::function<double(std::span<const double>)>& b, int count,
                       unsigned seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (const auto& x : interior_samples(D, count, rng)) {
        worst = std::max(worst, std::abs(a(std::span<const double>(x.data(), 2)) -
                                         b(std::span<const double>(x.data(), 2))));
    }
    return worst;
}

}  // namespace

TEST_CASE("local projection requires an interior cube") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return x[0] + x[1]; };
    CHECK_NOTHROW(local_projection(f, D, MultiIndex{1, 1}, MultiIndex{0, 1}, MultiIndex{1, 1}));
    CHECK_THROWS_AS(local_projection(f, D, MultiIndex{1, 1}, MultiIndex{-1, 0}, MultiIndex{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("local projection reproduces its own degree") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return 2.0 * x[0] - x[1] + 0.25; };
    const TensorPolynomial p =
        local_projection(f, D, MultiIndex{2, 2}, MultiIndex{1, 2}, MultiIndex{1, 1});
    const double x[2] = {0.4, 0.7};
    CHECK(p(std::span<const double>(x, 2)) == doctest::Approx(f(std::span<const double>(x, 2))).epsilon(1e-12));
}

TEST_CASE("quasi-interpolant reproduces polynomials of the expansion degree") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return (1.0 + x[0]) * (2.0 - x[1]); };
    const SplineExpansion e =
        quasi_interpolant(f, D, MultiIndex{2, 2}, MultiIndex{1, 1}, MultiIndex{2, 2});
    CHECK(sample_max_diff(D, f, [&e](std::span<const double> x) { return e(x); }, 200, 7) < 1e-10);
}

TEST_CASE("quasi-interpolant converges on the unit interval") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]); };
    // Degree one per axis, difference order two.
    std::vector<double> errs;
    for (int k = 3; k <= 6; ++k) {
        const SplineExpansion e = quasi_interpolant(f, D, MultiIndex{k}, MultiIndex{1}, MultiIndex{2});
        const ScalarField err = [&](std::span<const double> x) { return f(x) - e(x); };
        errs.push_back(lp_norm(err, D, 2.0, 9));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        CHECK(order > 1.7);
        CHECK(order < 2.3);
    }
}

TEST_CASE("telescoping block at level zero is the base quasi-interpolant") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]) * x[1]; };
    const SplineExpansion block =
        telescope_block(f, D, MultiIndex{0, 0}, MultiIndex{1, 1}, MultiIndex{2, 2});
    const SplineExpansion base =
        quasi_interpolant(f, D, MultiIndex{0, 0}, MultiIndex{1, 1}, MultiIndex{2, 2});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 2.5);
    for (int i = 0; i < 100; ++i) {
        const double x[2] = {u(rng), u(rng)};
        CHECK(block(std::span<const double>(x, 2)) ==
              doctest::Approx(base(std::span<const double>(x, 2))).epsilon(1e-12));
    }
}

TEST_CASE("telescoping blocks vanish on polynomials of the expansion degree") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return 0.5 + x[0] - 2.0 * x[1]; };
    for (const MultiIndex& kappa : {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{1, 1},
                                   MultiIndex{2, 1}}) {
        const SplineExpansion block =
            telescope_block(f, D, kappa, MultiIndex{1, 1}, MultiIndex{2, 2});
        CHECK(sample_max_diff(D, [](std::span<const double>) { return 0.0; },
                              [&block](std::span<const double> x) { return block(x); }, 100,
                              13) < 1e-10);
    }
}

TEST_CASE("closed coefficient form equals composing refinement with interpolants") {
    // The inclusion-exclusion block assembled from cached projections must
    // agree, as a function on all of R^2, with the alternating sum of
    // refined quasi-interpolants.
    const auto D = cube2();
    const auto f = [](std::span<const double> x) {
        return std::sin(kPi * x[0]) * std::cos(0.5 * kPi * x[1]);
    };
    const MultiIndex degree{1, 1};
    const MultiIndex m{2, 2};
    for (const MultiIndex& kappa : {MultiIndex{1, 0}, MultiIndex{1, 1}, MultiIndex{2, 1}}) {
        const SplineExpansion closed = telescope_block(f, D, kappa, degree, m);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 2.0);
        for (int i = 0; i < 100; ++i) {
            const double x[2] = {u(rng), u(rng)};
            double composed = 0.0;
            for (const SubsetMask& eps : SubsetMask::enumerate(2)) {
                if (!eps.subset_of(sigma(kappa))) continue;
                const SplineExpansion coarse =
                    quasi_interpolant(f, D, kappa - eps.chi(), degree, m);
                composed += eps.sign() * coarse.refined_by(eps)(std::span<const double>(x, 2));
            }
            CHECK(closed(std::span<const double>(x, 2)) ==
                  doctest::Approx(composed).epsilon(1e-11));
        }
    }
}

TEST_CASE("rectangle sums of blocks restrict to the top quasi-interpolant") {
    for (const char* name : {"cube2d", "lshape2d"}) {
        const auto D = DomainDescriptor::named(name);
        const auto f = [](std::span<const double> x) {
            return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
        };
        const MultiIndex degree{1, 1};
        const MultiIndex m{2, 2};
        ProjectionCache cache;
        for (int k = 0; k <= 2; ++k) {
            std::vector<SplineExpansion> blocks;
            IndexBox box{MultiIndex{0, 0}, MultiIndex{k, k}};
            box.for_each([&](const MultiIndex& kappa) {
                blocks.push_back(telescope_block(f, D, kappa, degree, m, 0, &cache));
            });
            const MultiLevelExpansion sum(std::move(blocks));
            const SplineExpansion top =
                quasi_interpolant(f, D, MultiIndex{k, k}, degree, m, 0, &cache);
            CHECK(sample_max_diff(D, [&sum](std::span<const double> x) { return sum(x); },
                                  [&top](std::span<const double> x) { return top(x); }, 200,
                                  19 + k) < 1e-9);
        }
    }
}

TEST_CASE("extension parameters derive the difference order from alpha") {
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    CHECK(params.l_alpha() == MultiIndex{2, 2});
    params.validate(2);

    ExtensionParams integer_alpha;
    integer_alpha.alpha = {1.0, 2.0};
    integer_alpha.m = MultiIndex{2, 3};
    CHECK(integer_alpha.l_alpha() == MultiIndex{2, 3});

    ExtensionParams bad;
    bad.alpha = {2.5, 2.5};
    bad.m = MultiIndex{2, 2};  // order too small for l = (3,3)
    CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
}

TEST_CASE("truncated extension restricts to the top-level interpolant") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 2;
    const MultiLevelExpansion ext = extend(f, D, params);
    CHECK(ext.blocks().size() == 9);
    const SplineExpansion top =
        quasi_interpolant(f, D, MultiIndex{2, 2}, MultiIndex{1, 1}, params.m);
    CHECK(sample_max_diff(D, [&ext](std::span<const double> x) { return ext(x); },
                          [&top](std::span<const double> x) { return top(x); }, 200, 23) < 1e-9);
}

TEST_CASE("extension of a degree-bounded polynomial is exact on the domain") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return 1.0 + 0.5 * x[0] - x[1]; };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 1;
    const MultiLevelExpansion ext = extend(f, D, params);
    CHECK(sample_max_diff(D, f, [&ext](std::span<const double> x) { return ext(x); }, 200, 29) <
          1e-10);
}

TEST_CASE("extension vanishes outside the union of supports") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]) * x[1]; };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 1;
    const MultiLevelExpansion ext = extend(f, D, params);
    const Box bb = ext.support_bounding_box();
    const double far1[2] = {bb.lo[0] - 0.25, 0.5};
    const double far2[2] = {0.5, bb.hi[1] + 0.25};
    CHECK(ext(std::span<const double>(far1, 2)) == 0.0);
    CHECK(ext(std::span<const double>(far2, 2)) == 0.0);
}

TEST_CASE("all operators are linear in the integrand") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]) * x[1]; };
    const auto g = [](std::span<const double> x) { return std::cos(kPi * x[1]) + x[0]; };
    const double a = 0.7, b = -1.3;
    const auto combo = [&](std::span<const double> x) { return a * f(x) + b * g(x); };

    const MultiIndex degree{1, 1};
    const MultiIndex m{2, 2};
    const MultiIndex kappa{1, 1};
    const SplineExpansion ef = quasi_interpolant(f, D, kappa, degree, m);
    const SplineExpansion eg = quasi_interpolant(g, D, kappa, degree, m);
    const SplineExpansion ec = quasi_interpolant(combo, D, kappa, degree, m);
    std::mt19937_64 rng(31);
    for (const auto& x : interior_samples(D, 100, rng)) {
        const std::span<const double> xs(x.data(), 2);
        CHECK(ec(xs) == doctest::Approx(a * ef(xs) + b * eg(xs)).epsilon(1e-11));
    }
}

TEST_CASE("diagnostics flag rows without usable moduli") {
    const auto D = cube2();
    const auto constant = [](std::span<const double>) { return 1.0; };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 1;
    OperatorDiagnosticsOptions opts;
    opts.x_res_log2 = 5;
    opts.xi_nodes = 4;
    const auto rows = operator_diagnostics(constant, D, params, MultiIndex{0, 0}, opts);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        if (sigma(row.kappa).is_empty()) {
            CHECK_FALSE(row.jackson_applicable);
        } else {
            // Constant integrand: modulus vanishes, block vanishes.
            CHECK_FALSE(row.jackson_applicable);
        }
        CHECK(row.stability_ratio > 0.0);
    }
}

TEST_CASE("derivative series error decreases with the truncation level") {
    // Summing the block derivatives over growing level rectangles approaches
    // the derivative of f on the domain; the error may not grow.
    const auto D = cube2();
    const auto f = [](std::span<const double> x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    const auto df = [](std::span<const double> x) {
        return kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    const MultiIndex lambda{1, 0};
    const MultiIndex degree{1, 1};
    const MultiIndex m{2, 2};
    ProjectionCache cache;
    std::vector<SplineExpansion> blocks;
    double prev = std::numeric_limits<double>::infinity();
    for (int K = 1; K <= 4; ++K) {
        IndexBox shell{MultiIndex{0, 0}, MultiIndex{K, K}};
        shell.for_each([&](const MultiIndex& kappa) {
            if (kappa.max() == K || (K == 1)) {
                blocks.push_back(telescope_block(f, D, kappa, degree, m, 0, &cache));
            }
        });
        const MultiLevelExpansion sum{std::vector<SplineExpansion>(blocks)};
        const ScalarField err = [&](std::span<const double> x) {
            return df(x) - sum.evaluate(lambda, x);
        };
        const double e = lp_norm(err, D, 2.0, 7);
        CHECK(e <= prev * 1.05);
        prev = e;
    }
}

TEST_CASE("derivatives are bounded by the sup-weighted norm over the registry") {
    const auto D = cube2();
    const auto registry = standard_registry(2);
    const double alpha[2] = {1.5, 1.5};
    BesovGrid grid;
    grid.k_max = 4;
    NormResolution res;
    res.x_res_log2 = 5;
    res.xi_nodes = 4;
    for (const char* name : {"sinpi", "sinpi21", "gauss"}) {
        const TestFunction& tf = find_function(registry, name);
        const double h_norm =
            besov_prime_norm(tf.field(), D, std::span<const double>(alpha, 2), 2.0,
                             std::numeric_limits<double>::infinity(), grid, res);
        for (const MultiIndex& lambda : {MultiIndex{1, 0}, MultiIndex{0, 1}}) {
            const double dnorm = lp_norm(tf.derivative_field(lambda), D, 2.0, 6);
            CHECK(std::isfinite(dnorm / h_norm));
            CHECK(dnorm / h_norm < 50.0);
        }
    }
}

TEST_CASE("the truncated extension varies continuously across the boundary") {
    // Smoke check: no jumps along a segment leaving the domain.
    const auto D = cube2();
    const auto f = [](std::span<const double> x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 2;
    const MultiLevelExpansion ext = extend(f, D, params);
    const double h = 1e-4;
    double prev = 0.0;
    bool first = true;
    for (double t = 0.5; t < 1.5; t += h) {
        const double x[2] = {t, 0.6};
        const double v = ext(std::span<const double>(x, 2));
        if (!first) {
            CHECK(std::abs(v - prev) < 0.01);
        }
        prev = v;
        first = false;
    }
}

TEST_CASE("three-dimensional smoke: reproduction on the unit cube") {
    const auto D = DomainDescriptor::named("cube3d");
    const auto f = [](std::span<const double> x) { return 1.0 + x[0] - 0.5 * x[1] + x[2]; };
    const SplineExpansion e = quasi_interpolant(f, D, MultiIndex{1, 1, 1}, MultiIndex{1, 1, 1},
                                                MultiIndex{1, 1, 1});
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 50; ++i) {
        const double x[3] = {u(rng), u(rng), u(rng)};
        CHECK(e(std::span<const double>(x, 3)) ==
              doctest::Approx(f(std::span<const double>(x, 3))).epsilon(1e-10));
    }
}

TEST_CASE("stability ratio at the base level is the plain norm quotient") {
    const auto D = cube2();
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]) * x[1] + 0.2; };
    ExtensionParams params;
    params.alpha = {1.5, 1.5};
    params.m = MultiIndex{2, 2};
    params.K = 0;
    OperatorDiagnosticsOptions opts;
    opts.x_res_log2 = 6;
    const auto rows = operator_diagnostics(f, D, params, MultiIndex{0, 0}, opts);
    REQUIRE(rows.size() == 1);
    const SplineExpansion e0 =
        quasi_interpolant(f, D, MultiIndex{0, 0}, MultiIndex{1, 1}, params.m);
    const double num = lp_norm_box([&e0](std::span<const double> x) { return e0(x); },
                                   e0.support_bounding_box(), 2.0, 6);
    const double den = lp_norm(f, D, 2.0, 6);
    CHECK(rows[0].stability_ratio == doctest::Approx(num / den).epsilon(1e-12));
}
