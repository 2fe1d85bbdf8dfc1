#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "mixext/multiindex.hpp"

using namespace mixext;

TEST_CASE("support set extraction") {
    CHECK(sigma(MultiIndex{0, 3, 0}).bits() == 0b010u);
    CHECK(sigma(MultiIndex{0, 0}).is_empty());
    CHECK(sigma(MultiIndex{1, -2, 5}) == SubsetMask::full(3));
}

TEST_CASE("mask and indicator round-trip") {
    for (const SubsetMask& J : SubsetMask::enumerate(3)) {
        CHECK(sigma(J.chi()) == J);
    }
}

TEST_CASE("subset enumeration has 2^d distinct masks") {
    for (int d = 1; d <= 4; ++d) {
        const auto all = SubsetMask::enumerate(d);
        CHECK(all.size() == (std::size_t{1} << d));
        std::set<unsigned> bits;
        for (const SubsetMask& m : all) bits.insert(m.bits());
        CHECK(bits.size() == all.size());
    }
}

TEST_CASE("alternating sign sum over subsets vanishes") {
    for (int d = 1; d <= 5; ++d) {
        int sum = 0;
        for (const SubsetMask& m : SubsetMask::enumerate(d)) sum += m.sign();
        CHECK(sum == 0);
    }
}

TEST_CASE("tensor binomial") {
    CHECK(tensor_binomial(MultiIndex{2, 2}, MultiIndex{1, 1}) == 4);
    CHECK(tensor_binomial(MultiIndex{3}, MultiIndex{0}) == 1);
    CHECK(tensor_binomial(MultiIndex{2, 1}, MultiIndex{2, 1}) == 1);
    CHECK_THROWS_AS(tensor_binomial(MultiIndex{2, 1}, MultiIndex{3, 0}), std::domain_error);
    CHECK_THROWS_AS(tensor_binomial(MultiIndex{2, 1}, MultiIndex{-1, 0}), std::domain_error);
}

TEST_CASE("checked arithmetic rejects overflow") {
    MultiIndex big(2, std::int64_t{1} << 62);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    CHECK_THROWS_AS(binomial(80, 40), std::overflow_error);
}

TEST_CASE("index box counts") {
    IndexBox b{MultiIndex{0, -1}, MultiIndex{2, 1}};
    CHECK(b.size() == 9);
    CHECK(b.to_vector().size() == 9);
    IndexBox empty{MultiIndex{1}, MultiIndex{0}};
    CHECK(empty.size() == 0);
    int visits = 0;
    empty.for_each([&](const MultiIndex&) { ++visits; });
    CHECK(visits == 0);
}

TEST_CASE("even shift decompositions, one axis") {
    const SubsetMask e1(1, 0b1);
    const auto even = even_shift_decompositions(MultiIndex{4}, e1, MultiIndex{1});
    REQUIRE(even.size() == 2);
    CHECK(even[0].mu == MultiIndex{0});
    CHECK(even[0].n == MultiIndex{2});
    CHECK(even[1].mu == MultiIndex{2});
    CHECK(even[1].n == MultiIndex{1});

    const auto odd = even_shift_decompositions(MultiIndex{5}, e1, MultiIndex{1});
    REQUIRE(odd.size() == 1);
    CHECK(odd[0].mu == MultiIndex{1});
    CHECK(odd[0].n == MultiIndex{2});
}

TEST_CASE("even shift decompositions, empty mask") {
    const auto terms =
        even_shift_decompositions(MultiIndex{4, 7}, SubsetMask::empty(2), MultiIndex{2, 2});
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].mu == MultiIndex{0, 0});
    CHECK(terms[0].n == MultiIndex{4, 7});
}

TEST_CASE("even shift decompositions reject m below one") {
    CHECK_THROWS_AS(even_shift_decompositions(MultiIndex{4}, SubsetMask(1, 0b1), MultiIndex{0}),
                    std::domain_error);
}

// Splitting the axes between two disjoint masks and halving in two stages
// lands on the same coarse index as halving once over the union.
TEST_CASE("halving composes across disjoint masks") {
    std::mt19937_64 rng(411);
    std::uniform_int_distribution<std::int64_t> nu_dist(-8, 8);
    std::uniform_int_distribution<std::int64_t> m_dist(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 3;
        MultiIndex nu(d, 0), m(d, 0);
        for (int j = 0; j < d; ++j) {
            nu[j] = nu_dist(rng);
            m[j] = m_dist(rng);
        }
        const SubsetMask eps(d, 0b011), eps2(d, 0b100);
        REQUIRE(eps.disjoint_from(eps2));
        for (const EvenShiftTerm& joint :
             even_shift_decompositions(nu, eps.united(eps2), m)) {
            // Stage one: restrict the shifts to eps.
            MultiIndex n1 = nu;
            for (int j = 0; j < d; ++j) {
                if (eps.contains(j)) n1[j] = (nu[j] - joint.mu[j]) / 2;
            }
            // Stage two: the remaining axes applied to the intermediate index.
            MultiIndex n2 = n1;
            for (int j = 0; j < d; ++j) {
                if (eps2.contains(j)) n2[j] = (n1[j] - joint.mu[j]) / 2;
            }
            CHECK(n2 == joint.n);
        }
    }
}
