#include "bfactory/generic_factory.hpp"

#include "bfactory/ksubset.hpp"
#include "bfactory/verifier.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace bfactory;
using bfactory::testing::TestRng;

namespace {

AffineSubspace simplex_slice(std::size_t n, const Rational& alpha) {
    RMatrix w(1, n);
    for (std::size_t i = 0; i < n; ++i) w(0, i) = 1;
    return AffineSubspace(std::move(w), {alpha});
}

AffineSubspace line_2_1() {
    RMatrix w(1, 2);
    w(0, 0) = 2;
    w(0, 1) = 1;
    return AffineSubspace(std::move(w), {parse_rational("3/2")});
}

const BMonomial& single(const BPolynomial& p) {
    REQUIRE(p.size() == 1);
    return p.monomials().front();
}

}  // namespace

TEST_CASE("generic weights on the half-integral slice") {
    const FactorySpec spec = build_generic(simplex_slice(3, parse_rational("3/2")));
    CHECK(spec.weights.size() == 6);
    // vertex (1/2, 1, 0) carries x_0(1-x_0) x_1 (1-x_2) with coefficient 1
    const VertexP v{parse_rational("1/2"), Rational(1), Rational(0)};
    const BMonomial& m = single(spec.weights.at(v));
    CHECK(m.coeff == 1);
    CHECK(m.exp_one == std::vector<std::uint32_t>{1, 1, 0});
    CHECK(m.exp_zero == std::vector<std::uint32_t>{1, 0, 1});
}

TEST_CASE("generic weights carry the |det W_S| coefficient") {
    const FactorySpec spec = build_generic(line_2_1());
    const VertexP v{parse_rational("3/4"), Rational(0)};
    const BMonomial& m = single(spec.weights.at(v));
    CHECK(m.coeff == 2);
    CHECK(m.exp_one == std::vector<std::uint32_t>{1, 0});
    CHECK(m.exp_zero == std::vector<std::uint32_t>{1, 1});
}

TEST_CASE("generic weights have per-variable degree 2 exactly on the basis") {
    TestRng rng(401);
    int built = 0;
    for (int trial = 0; trial < 40 && built < 6; ++trial) {
        const std::size_t n = 3 + rng.ext.uniform_index(3);
        const std::size_t k = 1 + rng.ext.uniform_index(2);
        RMatrix w = rng.matrix(k, n);
        if (rank(w) != k) continue;
        const AffineSubspace h(w, rng.vector(k, 2, 4));
        if (!is_generic(h) || valid_partitions(h).empty()) continue;
        ++built;
        const FactorySpec spec = build_generic(h);
        CHECK(spec.weights.size() == valid_partitions(h).size());
        for (const auto& [v, p] : spec.weights) {
            const BMonomial& m = single(p);
            for (std::size_t i = 0; i < n; ++i) {
                const bool fractional = v[i] > 0 && v[i] < 1;
                CHECK(m.degree(i) == (fractional ? 2u : 1u));
            }
        }
    }
    CHECK(built == 6);
}

TEST_CASE("build_generic refuses non-generic subspaces") {
    CHECK_THROWS_AS(build_generic(simplex_slice(3, Rational(2))), NonGenericError);
}

TEST_CASE("algorithm1 and the race agree on marginals") {
    const auto h = simplex_slice(3, parse_rational("3/2"));
    const RVector x(3, parse_rational("1/2"));
    const std::uint64_t trials = 60000;

    std::array<double, 3> race_freq{}, direct_freq{};
    {
        SimulatedCoins coins(x, 1001);
        ExternalRandomness ext(1002);
        const FactorySpec spec = build_generic(h);
        for (std::uint64_t t = 0; t < trials; ++t) {
            const RaceResult r = bernoulli_race(spec.weights, coins, ext);
            for (std::size_t i = 0; i < 3; ++i) {
                race_freq[i] += r.outcome->vertex[i].convert_to<double>();
            }
        }
    }
    {
        SimulatedCoins coins(x, 2001);
        ExternalRandomness ext(2002);
        for (std::uint64_t t = 0; t < trials; ++t) {
            const RaceResult r = algorithm1_sample(h, coins, ext);
            for (std::size_t i = 0; i < 3; ++i) {
                direct_freq[i] += r.outcome->vertex[i].convert_to<double>();
            }
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        // E[v_i] = x_i = 1/2; per-coordinate sd < 1/2 per draw
        const double sigma_bound = 0.5 / std::sqrt(static_cast<double>(trials));
        CHECK(std::abs(race_freq[i] / trials - 0.5) < 4 * sigma_bound);
        CHECK(std::abs(direct_freq[i] / trials - 0.5) < 4 * sigma_bound);
    }
}

TEST_CASE("algorithm1 terminates at a vertex of a generic polytope and returns it") {
    const auto h = line_2_1();
    const VertexP target{parse_rational("3/4"), Rational(0)};
    SimulatedCoins coins(target, 3001);
    ExternalRandomness ext(3002);
    for (int t = 0; t < 200; ++t) {
        const RaceResult r = algorithm1_sample(h, coins, ext);
        REQUIRE(!r.exhausted());
        CHECK(r.outcome->vertex == target);
    }
}

TEST_CASE("algorithm1 uses at most n + k coin flips per round") {
    const auto h = simplex_slice(4, parse_rational("5/2"));
    SimulatedCoins coins(RVector(4, parse_rational("5/8")), 3101);
    ExternalRandomness ext(3102);
    for (int t = 0; t < 500; ++t) {
        const std::uint64_t before = coins.flips_total();
        const RaceResult r = algorithm1_sample(h, coins, ext);
        CHECK(coins.flips_total() - before <= r.rounds * (4 + 1));
    }
}

TEST_CASE("strong extreme families") {
    SUBCASE("k = 1 outputs the hidden basis vertex and terminates there") {
        const FactorySpec spec = strong_factory_extremes(3, 1);
        VertexP e1{Rational(1), Rational(0), Rational(0)};
        SimulatedCoins coins(e1, 4001);
        ExternalRandomness ext(4002);
        for (int t = 0; t < 200; ++t) {
            const RaceResult r = bernoulli_race(spec.weights, coins, ext);
            REQUIRE(!r.exhausted());
            CHECK(r.outcome->vertex == e1);
        }
    }
    SUBCASE("k = n-1 mirrors it") {
        const FactorySpec spec = strong_factory_extremes(3, 2);
        VertexP v{Rational(0), Rational(1), Rational(1)};
        SimulatedCoins coins(v, 4003);
        ExternalRandomness ext(4004);
        for (int t = 0; t < 200; ++t) {
            CHECK(bernoulli_race(spec.weights, coins, ext).outcome->vertex == v);
        }
    }
    SUBCASE("identity certificate holds") {
        ExternalRandomness ext(4005);
        CHECK(verify_identity(strong_factory_extremes(4, 1), 30, ext).pass);
        CHECK(verify_identity(strong_factory_extremes(4, 3), 30, ext).pass);
    }
    CHECK_THROWS_AS(strong_factory_extremes(5, 2), std::invalid_argument);
}

TEST_CASE("perturbed build on the 2-of-3 slice recovers a Sampford family") {
    ExternalRandomness ext(5001);
    const FactorySpec spec =
        build_perturbed(simplex_slice(3, Rational(2)), parse_rational("1/64"), ext);
    CHECK(spec.provenance == Provenance::Perturbed);
    REQUIRE(spec.weights.size() == 3);

    const auto minus = sampford_weights(3, 2, SampfordVariant::Minus);
    const auto plus = sampford_weights(3, 2, SampfordVariant::Plus);
    bool matches_minus = true, matches_plus = true;
    for (const auto& [v, p] : spec.weights) {
        if (!poly_equal(p, minus.at(v))) matches_minus = false;
        if (!poly_equal(p, plus.at(v))) matches_plus = false;
    }
    CHECK((matches_minus || matches_plus));

    ExternalRandomness check_ext(5002);
    CHECK(verify_identity(spec, 50, check_ext).pass);
}

TEST_CASE("perturbed build on a generic input reproduces the generic weights") {
    ExternalRandomness ext(5003);
    const auto h = line_2_1();
    const FactorySpec direct = build_generic(h);
    const FactorySpec limit = build_perturbed(h, parse_rational("1/1024"), ext);
    REQUIRE(limit.weights.size() == direct.weights.size());
    for (const auto& [v, p] : direct.weights) {
        CHECK(poly_equal(p, limit.weights.at(v)));
    }
}

TEST_CASE("two independent perturbed builds are form-equal or both certified") {
    const auto h = simplex_slice(4, Rational(2));
    ExternalRandomness ext_a(5004), ext_b(5005);
    const FactorySpec a = build_perturbed(h, parse_rational("1/64"), ext_a);
    const FactorySpec b = build_perturbed(h, parse_rational("1/64"), ext_b);
    REQUIRE(a.weights.size() == b.weights.size());
    bool forms_equal = true;
    for (const auto& [v, p] : a.weights) {
        REQUIRE(b.weights.count(v) == 1);
        if (!poly_equal(p, b.weights.at(v))) forms_equal = false;
    }
    ExternalRandomness check(5006);
    const bool both_pass =
        verify_identity(a, 25, check).pass && verify_identity(b, 25, check).pass;
    CHECK((forms_equal || both_pass));
    CHECK(both_pass);
}

TEST_CASE("build_factory dispatches on genericity") {
    ExternalRandomness ext(5007);
    CHECK(build_factory(line_2_1(), parse_rational("1/64"), ext).provenance ==
          Provenance::Generic);
    CHECK(build_factory(simplex_slice(3, Rational(2)), parse_rational("1/64"), ext).provenance ==
          Provenance::Perturbed);
}

TEST_CASE("race over generic weights reproduces hidden marginals on the slice") {
    const auto h = simplex_slice(3, parse_rational("3/2"));
    const FactorySpec spec = build_generic(h);
    const RVector x(3, parse_rational("1/2"));
    const StatReport report = stat_check(spec, x, 100000, 6001);
    CHECK(report.completed == 100000);
    for (double z : report.z_scores) CHECK(std::abs(z) < 4.0);
    CHECK(report.p_value > 1e-4);
}
