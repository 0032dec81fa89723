#pragma once

#include "bfactory/generic_factory.hpp"

#include <functional>

namespace bfactory {

struct PointCheck {
    RVector x;
    RVector residual;     // sum_v P_v(x) (v - x), exact; must be all zeros
    Rational weight_sum;  // sum_v P_v(x); must be positive at interior points
};

struct IdentityReport {
    std::vector<PointCheck> points;
    bool residuals_zero = true;
    bool sums_positive = true;
    bool pass = false;
};

// Exact certificate for a factory: at each of num_points random rational
// convex combinations of the vertex keys (strictly positive weights, so the
// points lie in the relative interior of P), the vector residual
// sum_v P_v(x)(v - x) is computed exactly and must be identically zero, and
// sum_v P_v(x) must be positive.
IdentityReport verify_identity(const FactorySpec& spec, std::size_t num_points,
                               ExternalRandomness& ext);

// Same check for a bare weight family (used by samplers whose subspace is
// kept implicit, e.g. the matching weights on the full doubly stochastic
// constraint set).
IdentityReport verify_identity_weights(const std::map<VertexP, BPolynomial>& weights,
                                       std::size_t num_points, ExternalRandomness& ext);

// A strictly positive random rational convex combination of the given
// points (weights are integers in [1, 2^16], normalized).
RVector random_convex_combination(const std::vector<VertexP>& vertices, ExternalRandomness& ext);

struct ZonotopeReport {
    std::size_t points_tested = 0;
    std::size_t boundary_skipped = 0;
    std::size_t balance_violations = 0;
    Rational total_volume;     // sum over k-subsets T of I of |det W_T|
    Rational positive_volume;  // parallelotope volumes carrying sign +1
    Rational negative_volume;  // parallelotope volumes carrying sign -1
    bool volumes_match = false;
    bool pass = false;
};

// Membership/tiling check for the column family I = s_prime + {j}: builds
// the 2(k+1) signed parallelotopes, samples random rational points inside
// the spanned zonotope, and verifies that every interior point lies in
// exactly as many positive regions as negative ones (both 0 or both 1).
// Also checks that the signed region volumes each sum to the zonotope
// volume sum_{|T|=k} |det W_T| exactly.
ZonotopeReport zonotope_identity_check(const RMatrix& w, const IndexSet& s_prime, std::size_t j,
                                       std::size_t num_points, ExternalRandomness& ext);

struct StatReport {
    std::size_t requested = 0;
    std::size_t completed = 0;
    std::size_t budget_exhausted = 0;
    RVector empirical_mean;        // exact per-coordinate mean of sampled vertices
    std::vector<double> z_scores;  // (mean - x_i) * sqrt(N) / sigma_i
    double chi_square = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    std::uint64_t total_flips = 0;
    std::uint64_t total_rounds = 0;
    TailFit tail;
};

// Statistical acceptance test for any sampler against its exact weight
// family: runs n draws, compares per-coordinate means against the hidden x
// (z-scores use the exact vertex distribution's variance) and the vertex
// frequencies against the exact P_v(x) via chi-square.
StatReport stat_check_sampler(const std::function<RaceResult()>& draw,
                              const std::map<VertexP, BPolynomial>& weights, const RVector& x,
                              std::size_t n);

// Convenience wrapper racing a FactorySpec with SimulatedCoins(x, seed).
StatReport stat_check(const FactorySpec& spec, const RVector& x, std::size_t n,
                      std::uint64_t seed, std::optional<std::uint64_t> round_budget = std::nullopt);

}  // namespace bfactory
