#pragma once

#include "bfactory/generic_factory.hpp"

namespace bfactory {

// The slice sum(x) = alpha of the n-cube, 0 < alpha < n. Vertices carry
// k = floor(alpha) ones, one coordinate equal to alpha - k (dropped when
// alpha is integral), and zeros elsewhere.
struct KSubsetSpec {
    std::size_t n = 0;
    Rational alpha;
    std::size_t k = 0;
    bool integral = false;
};

KSubsetSpec make_ksubset(std::size_t n, const Rational& alpha);

AffineSubspace ksubset_subspace(const KSubsetSpec& spec);

enum class SampfordVariant { Minus, Plus };
enum class NonIntegerVariant { V1, V2 };

// Weight family for integral k. Minus: prod_{i in S} x_i prod_{j notin S}
// (1-x_j) * sum_{i in S} (1-x_i), the k-monomial expansion of the
// (k - sum_{S} x_i) factor. Plus: same product times sum_{j notin S} x_j.
// The two families differ as forms but agree after normalization everywhere
// on the slice.
std::map<VertexP, BPolynomial> sampford_weights(std::size_t n, std::size_t k, SampfordVariant v);

// Rejection sampler for non-integral alpha. V1 picks a vertex first and
// then checks every coin against it; V2 flips all coins first, demands
// k+1 successes, then downgrades a uniformly chosen success to the
// fractional slot with one extra flip that must come up 0. Identical
// output distributions.
RaceResult sample_noninteger(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                             NonIntegerVariant variant,
                             std::optional<std::uint64_t> round_budget = std::nullopt);

// Sampford rejection sampling for integral k: flip every coin, keep draws
// with exactly k ones (minus) or k+1 ones (plus), re-flip one uniformly
// chosen success and restart if it comes up 1 again.
RaceResult sampford_minus(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                          std::optional<std::uint64_t> round_budget = std::nullopt);
RaceResult sampford_plus(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                         std::optional<std::uint64_t> round_budget = std::nullopt);

// Exact per-round acceptance mass sum_v P_v(v') at a point v'. Uses the
// Sampford (minus) family for 1 < k < n-1 and the boundary-safe extreme
// families for k = 1 and k = n-1. Zero at vertices in the inner range, so
// no amount of sampling terminates there; positive for the extremes.
Rational boundary_probe(const KSubsetSpec& spec, const VertexP& v_prime);

}  // namespace bfactory
