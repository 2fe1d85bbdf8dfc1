#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "mixext/moduli.hpp"

using namespace mixext;

namespace {

constexpr double kPi = std::numbers::pi;

ModulusQuery query1d(std::int64_t order, double t, double p) {
    ModulusQuery q;
    q.l = MultiIndex{order};
    q.J = SubsetMask::full(1);
    q.t[0] = t;
    q.p = p;
    return q;
}

}  // namespace

TEST_CASE("mixed differences") {
    const auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
    for (double h : {0.1, 0.37, -0.2}) {
        for (double x : {0.0, 0.4, -1.2}) {
            CHECK(mixed_difference(sq, MultiIndex{2}, std::span<const double>(&h, 1),
                                   std::span<const double>(&x, 1)) ==
                  doctest::Approx(2.0 * h * h).epsilon(1e-12));
        }
    }
    const auto affine = [](std::span<const double> x) { return 3.0 * x[0] - 1.0; };
    const double h = 0.3, x = 0.2;
    CHECK(mixed_difference(affine, MultiIndex{2}, std::span<const double>(&h, 1),
                           std::span<const double>(&x, 1)) == doctest::Approx(0.0).epsilon(1e-13));
    // Zero order returns the value itself.
    CHECK(mixed_difference(affine, MultiIndex{0}, std::span<const double>(&h, 1),
                           std::span<const double>(&x, 1)) ==
          doctest::Approx(affine(std::span<const double>(&x, 1))));
}

TEST_CASE("mixed difference factorizes over axes") {
    const auto f = [](std::span<const double> x) { return x[0] * x[0] * x[1]; };
    const double h[2] = {0.25, 0.5};
    const double x[2] = {0.3, 0.1};
    // Second difference in x1 of x1^2 is 2 h1^2; first difference in x2 of x2
    // is h2; the mixed difference multiplies them.
    CHECK(mixed_difference(f, MultiIndex{2, 1}, std::span<const double>(h, 2),
                           std::span<const double>(x, 2)) ==
          doctest::Approx(2.0 * h[0] * h[0] * h[1]).epsilon(1e-12));
}

TEST_CASE("sup modulus of the identity map on the unit interval") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto f = [](std::span<const double> x) { return x[0]; };
    ModulusQuery q = query1d(1, 0.5, 1.0);
    q.x_res_log2 = 10;
    CHECK(omega_sup(f, D, q) == doctest::Approx(0.25).epsilon(2e-3));

    const auto c = [](std::span<const double>) { return 4.0; };
    CHECK(omega_sup(c, D, q) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("sup modulus is monotone in the step bound") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]); };
    double prev = 0.0;
    for (double t : {0.1, 0.2, 0.4, 0.8}) {
        ModulusQuery q = query1d(1, t, 2.0);
        q.x_res_log2 = 8;
        const double v = omega_sup(f, D, q);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("averaged modulus of the identity map has the analytic value") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto f = [](std::span<const double> x) { return x[0]; };
    ModulusQuery q = query1d(1, 0.5, 1.0);
    q.x_res_log2 = 10;
    q.xi_nodes = 16;
    CHECK(omega_avg(f, D, q) == doctest::Approx(1.0 / 6.0).epsilon(0.01));
}

TEST_CASE("averaged modulus never exceeds the sup modulus") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto registry = standard_registry(2);
    for (const auto& tf : registry) {
        if (tf.name == "one") continue;
        const ScalarField f = tf.field();
        for (const SubsetMask& J : SubsetMask::enumerate(2)) {
            if (J.is_empty()) continue;
            for (double t : {0.25, 0.5}) {
                ModulusQuery q;
                q.l = MultiIndex{2, 2};
                q.J = J;
                q.t[0] = q.t[1] = t;
                q.p = 2.0;
                q.x_res_log2 = 5;
                q.xi_nodes = 6;
                const double avg = omega_avg(f, D, q);
                const double sup = omega_sup(f, D, q);
                CHECK(avg <= sup * 1.02 + 1e-12);
            }
        }
    }
}

TEST_CASE("difference bounded by step powers times the derivative norm") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto registry = standard_registry(2);
    for (const char* name : {"x1x2", "sinpi", "gauss"}) {
        const TestFunction& tf = find_function(registry, name);
        for (const MultiIndex& l : {MultiIndex{1, 1}, MultiIndex{2, 1}}) {
            for (const double hx : {0.3, 0.1}) {
                const double h[2] = {hx, 0.2};
                const double dnorm = lp_norm(tf.derivative_field(l), D, 2.0, 7);
                double bound = dnorm;
                for (int j = 0; j < 2; ++j) {
                    bound *= std::pow(std::abs(h[j]), static_cast<double>(l[j]));
                }
                // Left side: the L2 norm of the difference over the shrunken set.
                const ScalarField f = tf.field();
                double acc = 0.0;
                const double cell = std::ldexp(1.0, -7);
                for (int i = 0; i < 128; ++i) {
                    for (int k = 0; k < 128; ++k) {
                        const double x[2] = {(i + 0.5) * cell, (k + 0.5) * cell};
                        if (!shrunken_contains(D, std::span<const double>(x, 2), l,
                                               std::span<const double>(h, 2))) {
                            continue;
                        }
                        const double dv = mixed_difference(f, l, std::span<const double>(h, 2),
                                                           std::span<const double>(x, 2));
                        acc += dv * dv;
                    }
                }
                const double lhs = std::sqrt(acc * cell * cell);
                CHECK(lhs <= bound * 1.02 + 1e-9);
            }
        }
    }
}

TEST_CASE("domain norms") {
    const auto cube = DomainDescriptor::named("cube2d");
    const auto one = [](std::span<const double>) { return 1.0; };
    CHECK(lp_norm(one, cube, 2.0, 7) == doctest::Approx(1.0).epsilon(1e-6));

    const auto lshape = DomainDescriptor::named("lshape2d");
    CHECK(lp_norm(one, lshape, 1.0, 7) == doctest::Approx(3.0).epsilon(0.01));

    const auto f = [](std::span<const double> x) { return std::sin(kPi * x[0]); };
    const auto cf = [](std::span<const double> x) { return -2.5 * std::sin(kPi * x[0]); };
    CHECK(lp_norm(cf, cube, 2.0, 6) ==
          doctest::Approx(2.5 * lp_norm(f, cube, 2.0, 6)).epsilon(1e-12));

    CHECK(lp_norm(f, cube, std::numeric_limits<double>::infinity(), 7) ==
          doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("difference order vector") {
    const double a1[2] = {1.5, 0.4};
    CHECK(difference_order(std::span<const double>(a1, 2)) == MultiIndex{2, 1});
    const double a2[1] = {2.0};
    CHECK(difference_order(std::span<const double>(a2, 1)) == MultiIndex{3});
}

TEST_CASE("mixed-smoothness norm of a constant is its plain norm") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto c = [](std::span<const double>) { return 3.0; };
    const double alpha[2] = {1.5, 1.5};
    NormResolution res;
    res.x_res_log2 = 5;
    res.xi_nodes = 4;
    BesovGrid grid;
    grid.k_max = 3;
    const double n2 = besov_prime_norm(c, D, std::span<const double>(alpha, 2), 2.0, 2.0, grid, res);
    CHECK(n2 == doctest::Approx(3.0).epsilon(1e-6));
    const double ninf = besov_prime_norm(c, D, std::span<const double>(alpha, 2), 2.0,
                                         std::numeric_limits<double>::infinity(), grid, res);
    CHECK(ninf == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("norms are absolutely homogeneous") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto registry = standard_registry(1);
    const TestFunction& tf = find_function(registry, "sinpi");
    const double alpha[1] = {1.25};
    NormResolution res;
    res.x_res_log2 = 6;
    res.xi_nodes = 4;
    BesovGrid grid;
    grid.k_max = 4;
    const ScalarField f = tf.field();
    const ScalarField g = [&tf](std::span<const double> x) { return -4.0 * tf(x); };
    const double nf = besov_prime_norm(f, D, std::span<const double>(alpha, 1), 2.0, 2.0, grid, res);
    const double ng = besov_prime_norm(g, D, std::span<const double>(alpha, 1), 2.0, 2.0, grid, res);
    CHECK(ng == doctest::Approx(4.0 * nf).epsilon(1e-10));
    CHECK(nf > 0.0);
}

TEST_CASE("norm value stabilizes as the step grid deepens") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto f = [](std::span<const double> x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    const double alpha[2] = {1.5, 1.5};
    NormResolution res;
    res.x_res_log2 = 6;
    res.xi_nodes = 4;
    BesovGrid g6, g8;
    g6.k_max = 6;
    g8.k_max = 8;
    const double v6 = besov_prime_norm(f, D, std::span<const double>(alpha, 2), 2.0, 2.0, g6, res);
    const double v8 = besov_prime_norm(f, D, std::span<const double>(alpha, 2), 2.0, 2.0, g8, res);
    CHECK(std::abs(v8 - v6) / v6 < 0.05);
}

TEST_CASE("sup-weighted norm dominates within the explicit constant") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto registry = standard_registry(2);
    const double alpha[2] = {1.25, 1.25};
    NormResolution res;
    res.x_res_log2 = 5;
    res.xi_nodes = 4;
    BesovGrid grid;
    grid.k_max = 4;
    double c4 = 1.0;
    for (double a : alpha) c4 *= std::exp2(2.0 + a);
    for (const char* name : {"x1x2", "sinpi", "gauss"}) {
        const ScalarField f = find_function(registry, name).field();
        const double h = besov_prime_norm(f, D, std::span<const double>(alpha, 2), 2.0,
                                          std::numeric_limits<double>::infinity(), grid, res);
        const double b = besov_prime_norm(f, D, std::span<const double>(alpha, 2), 2.0, 2.0,
                                          grid, res);
        CHECK(h <= c4 * b * 1.02);
    }
}

TEST_CASE("derivative-variant norm dominates the averaged-modulus norm at ell = 0") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto registry = standard_registry(1);
    const TestFunction& tf = find_function(registry, "sinpi");
    const double alpha[1] = {1.5};
    NormResolution res;
    res.x_res_log2 = 7;
    res.xi_nodes = 8;
    BesovGrid grid;
    grid.k_max = 5;
    const double prime =
        besov_prime_norm(tf.field(), D, std::span<const double>(alpha, 1), 2.0, 2.0, grid, res);
    const double ell0 = besov_ell_norm(tf, D, std::span<const double>(alpha, 1), 2.0, 2.0,
                                       MultiIndex{0}, grid, res);
    CHECK(prime <= ell0 * 1.05);
}

TEST_CASE("derivative-variant norm of a constant is its plain norm") {
    const auto D = DomainDescriptor::named("cube2d");
    const auto registry = standard_registry(2);
    const TestFunction& one = find_function(registry, "one");
    const double alpha[2] = {1.5, 1.5};
    NormResolution res;
    res.x_res_log2 = 5;
    res.xi_nodes = 4;
    BesovGrid grid;
    grid.k_max = 3;
    const double v = besov_ell_norm(one, D, std::span<const double>(alpha, 2), 2.0, 2.0,
                                    MultiIndex{1, 1}, grid, res);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("derivative-variant norm rejects ell at or above alpha") {
    const auto D = DomainDescriptor::named("cube1d");
    const auto registry = standard_registry(1);
    const TestFunction& tf = find_function(registry, "sinpi");
    const double alpha[1] = {1.5};
    CHECK_THROWS_AS(besov_ell_norm(tf, D, std::span<const double>(alpha, 1), 2.0, 2.0,
                                   MultiIndex{2}),
                    std::invalid_argument);
}

TEST_CASE("registry derivative oracles match finite differences") {
    const auto registry = standard_registry(2);
    const double h = 1e-5;
    for (const auto& tf : registry) {
        if (tf.name == "rough1") continue;  // unbounded derivative near the kink
        for (int axis = 0; axis < 2; ++axis) {
            const MultiIndex lambda = MultiIndex::unit(2, axis);
            const double x[2] = {0.31, 0.47};
            double xp[2] = {x[0], x[1]};
            double xm[2] = {x[0], x[1]};
            xp[axis] += h;
            xm[axis] -= h;
            const double fd = (tf(std::span<const double>(xp, 2)) -
                               tf(std::span<const double>(xm, 2))) /
                              (2.0 * h);
            const double an = tf.deriv(lambda, std::span<const double>(x, 2));
            CHECK(an == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("lattice memoization is transparent") {
    int calls = 0;
    const ScalarField base = [&calls](std::span<const double> x) {
        ++calls;
        return x[0] + 2.0 * x[1];
    };
    const ScalarField cached = memoized_on_lattice(base, 4);
    const double on[2] = {0.5 + std::ldexp(1.0, -5), 0.25};  // half-grid points
    const double v1 = cached(std::span<const double>(on, 2));
    const double v2 = cached(std::span<const double>(on, 2));
    CHECK(v1 == v2);
    CHECK(calls == 1);
    const double off[2] = {0.123456, 0.25};
    cached(std::span<const double>(off, 2));
    cached(std::span<const double>(off, 2));
    CHECK(calls == 3);  // off-lattice points bypass the cache
}
