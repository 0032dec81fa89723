#include "bfactory/sampling.hpp"

#include <bit>
#include <cmath>

namespace bfactory {

namespace detail {

ExactCoin::ExactCoin(const Rational& p) : value(p) {
    if (p < 0 || p > 1) throw std::invalid_argument("coin probability outside [0,1]");
    if (p == 0) {
        is_zero = true;
        return;
    }
    if (p == 1) {
        is_one = true;
        return;
    }
    const BigInt n = numerator(p), d = denominator(p);
    if (d <= BigInt(std::uint64_t{1} << 63)) {
        fits64 = true;
        num = n.convert_to<std::uint64_t>();
        den = d.convert_to<std::uint64_t>();
    }
}

bool ExactCoin::sample(std::mt19937_64& rng) const {
    if (is_zero) return false;
    if (is_one) return true;
    if (fits64) {
        // Compare U = 0.u1 u2 ... (base 2^64) against a/b, one word at a time.
        // Each word decides unless u = floor(a*2^64/b) and the fraction is
        // not dyadic at this depth, which happens with probability < 2^-63.
        std::uint64_t a = num;
        const std::uint64_t b = den;
        while (true) {
            const std::uint64_t u = rng();
            const unsigned __int128 lhs = static_cast<unsigned __int128>(u) * b;
            const unsigned __int128 rhs = static_cast<unsigned __int128>(a) << 64;
            if (lhs + b <= rhs) return true;   // (u+1)/2^64 <= a/b
            if (lhs >= rhs) return false;      // u/2^64 >= a/b
            a = static_cast<std::uint64_t>(rhs - lhs);  // new target a'/b, 0 < a' < b
        }
    }
    BigInt a = numerator(value);
    const BigInt b = denominator(value);
    while (true) {
        const std::uint64_t u = rng();
        const BigInt lhs = BigInt(u) * b;
        const BigInt rhs = a << 64;
        if (lhs + b <= rhs) return true;
        if (lhs >= rhs) return false;
        a = rhs - lhs;
    }
}

}  // namespace detail

ExternalRandomness::ExternalRandomness(std::uint64_t seed) : rng_(seed) {}

bool ExternalRandomness::bit() {
    if (bits_left_ == 0) {
        bit_buffer_ = rng_();
        bits_left_ = 64;
    }
    const bool b = bit_buffer_ & 1;
    bit_buffer_ >>= 1;
    --bits_left_;
    return b;
}

std::size_t ExternalRandomness::uniform_index(std::size_t m) {
    if (m == 0) throw std::invalid_argument("uniform_index over empty range");
    if (m == 1) return 0;
    const unsigned bits = std::bit_width(m - 1);
    while (true) {
        std::size_t r = 0;
        for (unsigned t = 0; t < bits; ++t) r = (r << 1) | (bit() ? 1 : 0);
        if (r < m) return r;
    }
}

bool ExternalRandomness::bernoulli(const Rational& p) {
    return detail::ExactCoin(p).sample(rng_);
}

std::int64_t ExternalRandomness::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int with empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(uniform_index(span));
}

std::optional<std::size_t> ExternalRandomness::pick_weighted(
    const std::vector<Rational>& weights, const Rational& norm) {
    Rational remaining = norm;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] < 0) throw std::invalid_argument("negative weight");
        if (remaining < weights[j]) throw std::invalid_argument("weights exceed normalizer");
        if (remaining == 0) return std::nullopt;
        if (bernoulli(weights[j] / remaining)) return j;
        remaining -= weights[j];
    }
    return std::nullopt;
}

SimulatedCoins::SimulatedCoins(RVector hidden_x, std::uint64_t seed)
    : x_(std::move(hidden_x)), rng_(seed), per_coord_(x_.size(), 0) {
    coins_.reserve(x_.size());
    for (const Rational& p : x_) coins_.emplace_back(p);
}

bool SimulatedCoins::flip(std::size_t i) {
    if (i >= coins_.size()) throw std::out_of_range("coin index out of range");
    ++per_coord_[i];
    ++total_;
    return coins_[i].sample(rng_);
}

bool one_bit_bernstein(const BPolynomial& p, const Rational& c_norm, CoinSource& coins,
                       ExternalRandomness& ext) {
    const Rational total = coeff_sum(p);
    if (c_norm < total) {
        throw std::invalid_argument("normalizer below coefficient sum");
    }
    std::vector<Rational> weights;
    weights.reserve(p.size());
    for (const auto& m : p.monomials()) weights.push_back(m.coeff);
    const auto picked = ext.pick_weighted(weights, c_norm);
    if (!picked) return false;
    const BMonomial& m = p.monomials()[*picked];
    for (std::size_t i = 0; i < m.vars(); ++i) {
        for (std::uint32_t t = 0; t < m.exp_one[i]; ++t) {
            if (!coins.flip(i)) return false;
        }
        for (std::uint32_t t = 0; t < m.exp_zero[i]; ++t) {
            if (coins.flip(i)) return false;
        }
    }
    return true;
}

RaceResult bernoulli_race(const std::map<VertexP, BPolynomial>& weights, CoinSource& coins,
                          ExternalRandomness& ext, std::optional<std::uint64_t> round_budget) {
    if (weights.empty()) throw std::invalid_argument("race over empty weight map");
    std::vector<const VertexP*> vertices;
    std::vector<const BPolynomial*> polys;
    vertices.reserve(weights.size());
    Rational c_norm(0);
    for (const auto& [v, p] : weights) {
        vertices.push_back(&v);
        polys.push_back(&p);
        c_norm = std::max(c_norm, coeff_sum(p));
    }

    RaceResult result;
    const std::uint64_t flips_before = coins.flips_total();
    while (true) {
        if (round_budget && result.rounds >= *round_budget) {
            result.flips = coins.flips_total() - flips_before;
            return result;  // budget exhausted
        }
        ++result.rounds;
        const std::size_t pick = ext.uniform_index(vertices.size());
        if (one_bit_bernstein(*polys[pick], c_norm, coins, ext)) {
            result.flips = coins.flips_total() - flips_before;
            result.outcome = SampleOutcome{*vertices[pick], result.rounds, result.flips};
            return result;
        }
    }
}

TailFit tail_fit(const std::vector<SampleOutcome>& samples,
                 const std::vector<std::uint64_t>& thresholds) {
    if (samples.empty()) throw std::invalid_argument("tail_fit on empty sample set");
    TailFit fit;
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> points;  // (d, log prob)
    for (std::uint64_t d : thresholds) {
        TailRow row;
        row.threshold = d;
        for (const auto& s : samples) {
            if (s.flips > d) ++row.exceedances;
        }
        row.prob = static_cast<double>(row.exceedances) / n;
        if (row.exceedances >= 30) {
            points.emplace_back(static_cast<double>(d), std::log(row.prob));
        }
        fit.table.push_back(row);
    }
    if (points.size() < 2) {
        fit.degenerate = true;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(points.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0) {
        fit.degenerate = true;
        return fit;
    }
    const double slope = (m * sxy - sx * sy) / denom;
    fit.c_hat = std::exp(slope);
    return fit;
}

}  // namespace bfactory
