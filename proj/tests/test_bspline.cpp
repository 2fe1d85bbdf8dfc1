#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "mixext/bspline.hpp"

using namespace mixext;

TEST_CASE("psi point values") {
    CHECK(eval_psi(0, 0, 0.5) == 1.0);
    CHECK(eval_psi(0, 0, -0.1) == 0.0);
    CHECK(eval_psi(1, 0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval_psi(2, 0, 1.5) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(eval_psi(3, 0, -0.1) == 0.0);
    CHECK(eval_psi(3, 0, 4.0) == 0.0);
}

TEST_CASE("psi positivity matches the open support") {
    for (int m = 0; m <= 4; ++m) {
        // Off-knot sample points; at knots the value is the right-hand limit.
        for (int i = 0; i <= 400; ++i) {
            const double x = -0.5 + 0.0037 + i * 0.01 * (m + 2);
            const double v = eval_psi(m, 0, x);
            if (x > 0.0 && x < m + 1.0) {
                CHECK(v > 0.0);
            } else {
                CHECK(v == 0.0);
            }
        }
    }
    // Right-continuity at the left end of the support.
    CHECK(eval_psi(0, 0, 0.0) == 1.0);
    CHECK(eval_psi(0, 0, 1.0) == 0.0);
    CHECK(eval_psi(1, 0, 0.0) == 0.0);
}

TEST_CASE("psi rejects invalid derivative orders") {
    CHECK_THROWS_AS(eval_psi(2, 3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(eval_psi(-1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("refinement coefficients") {
    CHECK(refinement_coeffs(0) == std::vector<double>{1.0, 1.0});
    CHECK(refinement_coeffs(1) == std::vector<double>{0.5, 1.0, 0.5});
    CHECK(refinement_coeffs(2) == std::vector<double>{0.25, 0.75, 0.75, 0.25});
}

TEST_CASE("refinement coefficient parity sums are exactly one") {
    for (int m = 0; m <= 12; ++m) {
        const auto a = refinement_coeffs(m);
        double even = 0.0, odd = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) (i % 2 ? odd : even) += a[i];
        CHECK(even == 1.0);
        CHECK(odd == 1.0);
    }
}

TEST_CASE("two-scale relation") {
    for (int m = 0; m <= 4; ++m) {
        const auto a = refinement_coeffs(m);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = -1.0 + i * (m + 3.0) / 999.0;
            double rhs = 0.0;
            for (int mu = 0; mu <= m + 1; ++mu) {
                rhs += a[static_cast<std::size_t>(mu)] * eval_psi(m, 0, 2.0 * x - mu);
            }
            worst = std::max(worst, std::abs(eval_psi(m, 0, x) - rhs));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("partition of unity on the line") {
    for (int m = 0; m <= 4; ++m) {
        for (int i = 0; i < 500; ++i) {
            const double x = -3.0 + i * 0.017;
            double sum = 0.0;
            for (int nu = static_cast<int>(std::floor(x)) - m - 1;
                 nu <= static_cast<int>(std::floor(x)) + 1; ++nu) {
                sum += eval_psi(m, 0, x - nu);
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("derivative matches central differences away from knots") {
    const double h = 1e-5;
    for (int m = 1; m <= 4; ++m) {
        for (int i = 0; i < 200; ++i) {
            const double x = 0.05 + i * (m + 0.9) / 200.0 + 0.003;  // avoid knots
            const double fd = (eval_psi(m, 0, x + h) - eval_psi(m, 0, x - h)) / (2.0 * h);
            CHECK(eval_psi(m, 1, x) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("dilated translate values and supports") {
    const double x1 = 1.0;
    CHECK(eval_g(MultiIndex{1}, MultiIndex{1}, MultiIndex{1}, MultiIndex{0},
                 std::span<const double>(&x1, 1)) == doctest::Approx(1.0));

    // Identity dilation reduces to the base spline.
    const double x2 = 0.7;
    CHECK(eval_g(MultiIndex{0}, MultiIndex{0}, MultiIndex{2}, MultiIndex{0},
                 std::span<const double>(&x2, 1)) == doctest::Approx(eval_psi(2, 0, 0.7)));

    // Outside the support box the value vanishes.
    const double outside[2] = {2.1, 0.5};
    CHECK(eval_g(MultiIndex{1, 1}, MultiIndex{0, 0}, MultiIndex{1, 1}, MultiIndex{0, 0},
                 std::span<const double>(outside, 2)) == 0.0);

    const SupportBox s1 = support_g(MultiIndex{0}, MultiIndex{0}, MultiIndex{2});
    CHECK(s1.lo[0] == 0.0);
    CHECK(s1.hi[0] == 3.0);
    const SupportBox s2 = support_g(MultiIndex{2}, MultiIndex{4}, MultiIndex{1});
    CHECK(s2.lo[0] == 1.0);
    CHECK(s2.hi[0] == 1.5);
    const SupportBox s3 = support_g(MultiIndex{0}, MultiIndex{-1}, MultiIndex{0});
    CHECK(s3.lo[0] == -1.0);
    CHECK(s3.hi[0] == 0.0);
}

TEST_CASE("derivative scaling of dilated translates") {
    // d/dx psi(2^k x - nu) picks up a factor 2^k.
    const double x = 0.4;
    const double direct = eval_g(MultiIndex{2}, MultiIndex{0}, MultiIndex{2}, MultiIndex{1},
                                 std::span<const double>(&x, 1));
    CHECK(direct == doctest::Approx(4.0 * eval_psi(2, 1, 4.0 * 0.4)));
}

TEST_CASE("dilated translate rejects excessive derivative order") {
    const double x = 0.5;
    CHECK_THROWS_AS(eval_g(MultiIndex{0}, MultiIndex{0}, MultiIndex{1}, MultiIndex{2},
                           std::span<const double>(&x, 1)),
                    std::invalid_argument);
}

TEST_CASE("product refinement weights multiply per axis") {
    const MultiIndex m{1, 2};
    const SubsetMask both = SubsetMask::full(2);
    const MultiIndex mu{1, 2};
    CHECK(refinement_weight(mu, both, m) == doctest::Approx(1.0 * 0.75).epsilon(1e-15));
    CHECK(refinement_weight(MultiIndex{0, 0}, SubsetMask::empty(2), m) == 1.0);
}
