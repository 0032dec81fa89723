#include "bfactory/bernstein.hpp"

#include "bfactory/ksubset.hpp"
#include "bfactory/matching.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfactory;
using bfactory::testing::TestRng;

namespace {

// Monomial over n variables from (coeff, sparse exponents).
BMonomial mono(std::size_t n, Rational c, std::initializer_list<std::pair<std::size_t, char>> spec) {
    BMonomial m{std::move(c), std::vector<std::uint32_t>(n, 0), std::vector<std::uint32_t>(n, 0)};
    for (const auto& [i, kind] : spec) {
        if (kind == 'x') {
            m.exp_one[i] += 1;
        } else {
            m.exp_zero[i] += 1;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("evaluation basics") {
    const BPolynomial p(2, {mono(2, 1, {{0, 'x'}})});  // x_0
    CHECK(evaluate(p, {Rational(1), Rational(0)}) == 1);
    CHECK(evaluate(p, {parse_rational("1/3"), Rational(1)}) == parse_rational("1/3"));
    CHECK_THROWS_AS(evaluate(p, {Rational(1)}), DimensionError);
}

TEST_CASE("matching polynomial value at the uniform doubly stochastic point") {
    const Permutation identity{0, 1, 2};
    const BPolynomial p = arborescence_polynomial(identity, 0);
    const RVector x(9, parse_rational("1/3"));
    CHECK(evaluate(p, x) == parse_rational("1/81"));
}

TEST_CASE("a shared x_i factor zeroes the evaluation") {
    const BPolynomial p(2, {mono(2, 2, {{0, 'x'}, {1, 'x'}}), mono(2, 1, {{0, 'x'}, {1, 'o'}})});
    CHECK(evaluate(p, {Rational(0), parse_rational("1/2")}) == 0);
}

TEST_CASE("coefficient sums") {
    CHECK(coeff_sum(BPolynomial(3, {mono(3, 1, {{0, 'x'}})})) == 1);
    const BPolynomial p_matching = arborescence_polynomial({0, 1, 2}, 0);
    CHECK(coeff_sum(p_matching) == 3);  // one unit monomial per arborescence
    CHECK(p_matching.size() == 3);
}

TEST_CASE("max degree tracks both exponent kinds") {
    const BPolynomial p(2, {mono(2, 1, {{0, 'x'}, {0, 'o'}}), mono(2, 1, {{1, 'o'}})});
    const auto deg = max_degree(p);
    CHECK(deg[0] == 2);
    CHECK(deg[1] == 1);
}

TEST_CASE("monomial division") {
    SUBCASE("exact quotient") {
        const BPolynomial p(2, {mono(2, 1, {{0, 'x'}, {1, 'o'}})});  // x_0 (1-x_1)
        const auto quotient = divide_by_monomial(p, mono(2, 1, {{1, 'o'}}));
        REQUIRE(quotient.has_value());
        CHECK(*quotient == BPolynomial(2, {mono(2, 1, {{0, 'x'}})}));
    }
    SUBCASE("not divisible") {
        const BPolynomial p(1, {mono(1, 1, {{0, 'x'}})});
        CHECK(!divide_by_monomial(p, mono(1, 1, {{0, 'o'}})).has_value());
    }
    SUBCASE("round trip") {
        TestRng rng(42);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<BMonomial> ms;
            for (int t = 0; t < 3; ++t) {
                BMonomial m{Rational(rng.ext.uniform_int(1, 9)), {}, {}};
                m.exp_one = {static_cast<std::uint32_t>(rng.ext.uniform_index(3) + 1),
                             static_cast<std::uint32_t>(rng.ext.uniform_index(3))};
                m.exp_zero = {static_cast<std::uint32_t>(rng.ext.uniform_index(3)),
                              static_cast<std::uint32_t>(rng.ext.uniform_index(3) + 1)};
                ms.push_back(std::move(m));
            }
            const BPolynomial base(2, std::move(ms));
            const BMonomial divisor = mono(2, 1, {{0, 'x'}, {1, 'o'}});
            const BPolynomial product = multiply_by_monomial(base, divisor);
            const auto back = divide_by_monomial(product, divisor);
            REQUIRE(back.has_value());
            CHECK(*back == base);
        }
    }
}

TEST_CASE("form equality is order-insensitive but form-strict") {
    const BMonomial a = mono(2, 1, {{0, 'x'}});
    const BMonomial b = mono(2, 2, {{1, 'o'}});
    CHECK(BPolynomial(2, {a, b}) == BPolynomial(2, {b, a}));

    // x_0 and x_0 x_1 + x_0 (1-x_1) agree as functions but not as forms.
    const BPolynomial plain(2, {mono(2, 1, {{0, 'x'}})});
    const BPolynomial split(2, {mono(2, 1, {{0, 'x'}, {1, 'x'}}), mono(2, 1, {{0, 'x'}, {1, 'o'}})});
    CHECK(!poly_equal(plain, split));
    TestRng rng(7);
    for (int t = 0; t < 5; ++t) {
        const Rational x0 = abs(rng.rational(1, 8));
        const Rational x1 = abs(rng.rational(1, 8));
        CHECK(evaluate(plain, {x0, x1}) == evaluate(split, {x0, x1}));
    }
}

TEST_CASE("the two Sampford families differ as forms, agree normalized on the slice") {
    const auto minus = sampford_weights(4, 2, SampfordVariant::Minus);
    const auto plus = sampford_weights(4, 2, SampfordVariant::Plus);
    REQUIRE(minus.size() == 6);
    REQUIRE(plus.size() == 6);
    for (const auto& [v, p] : minus) {
        CHECK(!poly_equal(p, plus.at(v)));
        CHECK(p.size() == 2);          // k monomials
        CHECK(plus.at(v).size() == 2);  // n - k monomials
    }
}

TEST_CASE("canonicalization merges duplicate exponent patterns") {
    const BMonomial m = mono(2, 1, {{0, 'x'}});
    const BPolynomial p(2, {m, m});
    CHECK(p.size() == 1);
    CHECK(p.monomials().front().coeff == 2);
}

TEST_CASE("positivity and linearity") {
    TestRng rng(43);
    const BPolynomial p(2, {mono(2, 1, {{0, 'x'}, {1, 'o'}}), mono(2, 3, {{0, 'o'}})});
    const BPolynomial q(2, {mono(2, 2, {{1, 'x'}})});
    for (int t = 0; t < 20; ++t) {
        const RVector x{Rational(rng.ext.uniform_int(0, 16)) / 16,
                        Rational(rng.ext.uniform_int(0, 16)) / 16};
        CHECK(evaluate(p, x) >= 0);
        CHECK(evaluate(poly_sum(p, q), x) == evaluate(p, x) + evaluate(q, x));
        if (x[0] > 0 && x[0] < 1 && x[1] > 0 && x[1] < 1) {
            CHECK(evaluate(p, x) > 0);
        }
    }
    CHECK(BPolynomial(2).empty());
    CHECK_THROWS_AS(BPolynomial(2, {mono(2, Rational(0), {})}), std::invalid_argument);
}
