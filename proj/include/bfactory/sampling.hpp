#pragma once

#include "bfactory/bernstein.hpp"
#include "bfactory/polytope.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace bfactory {

// The only channel through which samplers may see the hidden point x:
// flip(i) draws one Bernoulli(x_i) bit, independent of all other flips.
class CoinSource {
public:
    virtual ~CoinSource() = default;
    virtual bool flip(std::size_t i) = 0;
    virtual std::uint64_t flips_total() const = 0;
    virtual std::uint64_t flips_for(std::size_t i) const = 0;
};

namespace detail {

// Exact comparison of a lazily-drawn uniform U in [0,1) against a rational
// threshold, refining 64 bits at a time. The fast path keeps the running
// threshold as a 64-bit fraction; arbitrary denominators fall back to GMP.
struct ExactCoin {
    bool is_zero = false, is_one = false;
    bool fits64 = false;
    std::uint64_t num = 0, den = 1;
    Rational value;

    explicit ExactCoin(const Rational& p);
    bool sample(std::mt19937_64& rng) const;
};

}  // namespace detail

// Seedable source of known-probability randomness (the factory's coin flips
// with *known* bias, uniform choices, and integer draws). Independent of any
// CoinSource. Identical seeds reproduce identical draws bit for bit.
class ExternalRandomness {
public:
    explicit ExternalRandomness(std::uint64_t seed);

    bool bit();
    // Exactly uniform over {0, ..., m-1} via power-of-two rejection.
    std::size_t uniform_index(std::size_t m);
    // Exact Bernoulli(p) for known rational p in [0,1].
    bool bernoulli(const Rational& p);
    // Exactly uniform over {lo, ..., hi} (inclusive); range must fit in 64 bits.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    // Index j with probability weights[j]/norm; nullopt with the remaining
    // probability 1 - sum(weights)/norm. Requires sum(weights) <= norm.
    std::optional<std::size_t> pick_weighted(const std::vector<Rational>& weights,
                                             const Rational& norm);

private:
    std::mt19937_64 rng_;
    std::uint64_t bit_buffer_ = 0;
    unsigned bits_left_ = 0;
};

// Standard CoinSource for simulation and tests: holds a hidden x and serves
// exact Bernoulli(x_i) flips from a seeded stream. Samplers must never read
// hidden_point(); it exists for test assertions only.
class SimulatedCoins final : public CoinSource {
public:
    SimulatedCoins(RVector hidden_x, std::uint64_t seed);

    bool flip(std::size_t i) override;
    std::uint64_t flips_total() const override { return total_; }
    std::uint64_t flips_for(std::size_t i) const override { return per_coord_[i]; }

    const RVector& hidden_point() const { return x_; }

private:
    RVector x_;
    std::vector<detail::ExactCoin> coins_;
    std::mt19937_64 rng_;
    std::vector<std::uint64_t> per_coord_;
    std::uint64_t total_ = 0;
};

// A sampled vertex together with the iteration and flip cost of producing it.
struct SampleOutcome {
    VertexP vertex;
    std::uint64_t rounds = 0;  // race iterations, >= 1
    std::uint64_t flips = 0;   // coin flips drawn from the CoinSource
};

// Race result: outcome absent means the round budget was exhausted first.
struct RaceResult {
    std::optional<SampleOutcome> outcome;
    std::uint64_t rounds = 0;
    std::uint64_t flips = 0;

    bool exhausted() const { return !outcome.has_value(); }
};

// One-bit factory for p(x)/c_norm: picks a monomial with probability
// coeff/c_norm using external randomness, then demands exp_one[i] ones
// followed by exp_zero[i] zeros from coin i (aborting at the first
// mismatch). Requires c_norm >= coeff_sum(p).
bool one_bit_bernstein(const BPolynomial& p, const Rational& c_norm, CoinSource& coins,
                       ExternalRandomness& ext);

// Repeatedly picks a vertex uniformly and runs its one-bit factory with the
// shared normalizer max_v coeff_sum(P_v) until some vertex is accepted.
// Conditional on termination the output is v with probability
// P_v(x) / sum_v' P_v'(x).
RaceResult bernoulli_race(const std::map<VertexP, BPolynomial>& weights, CoinSource& coins,
                          ExternalRandomness& ext,
                          std::optional<std::uint64_t> round_budget = std::nullopt);

struct TailRow {
    std::uint64_t threshold = 0;
    std::uint64_t exceedances = 0;
    double prob = 0.0;  // empirical Pr[T > threshold]
};

struct TailFit {
    std::vector<TailRow> table;
    std::optional<double> c_hat;  // exp(slope) of log Pr[T > d] vs d
    bool degenerate = false;      // too few usable thresholds for a fit
};

// Least-squares fit of log Pr[T > d] against d over the thresholds with at
// least 30 exceedances. T is the flip count of each sample.
TailFit tail_fit(const std::vector<SampleOutcome>& samples,
                 const std::vector<std::uint64_t>& thresholds);

}  // namespace bfactory
