#include "bfactory/ksubset.hpp"

#include <algorithm>

namespace bfactory {

KSubsetSpec make_ksubset(std::size_t n, const Rational& alpha) {
    if (n < 2) throw std::invalid_argument("k-subset slice needs n >= 2");
    if (alpha <= 0 || alpha >= Rational(static_cast<int>(n))) {
        throw std::invalid_argument("alpha must lie strictly between 0 and n");
    }
    KSubsetSpec spec;
    spec.n = n;
    spec.alpha = alpha;
    spec.k = bfactory::floor(alpha).convert_to<std::size_t>();
    spec.integral = is_integer(alpha);
    return spec;
}

AffineSubspace ksubset_subspace(const KSubsetSpec& spec) {
    RMatrix w(1, spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) w(0, i) = 1;
    return AffineSubspace(std::move(w), {spec.alpha});
}

namespace {

template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    IndexSet s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = i;
    if (k == 0 || k > n) return;
    while (true) {
        fn(s);
        std::size_t i = k;
        while (i-- > 0) {
            if (s[i] != i + n - k) break;
            if (i == 0) return;
        }
        if (s[i] == i + n - k) return;
        ++s[i];
        for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
}

VertexP subset_vertex(std::size_t n, const IndexSet& ones) {
    VertexP v(n, Rational(0));
    for (std::size_t i : ones) v[i] = 1;
    return v;
}

}  // namespace

std::map<VertexP, BPolynomial> sampford_weights(std::size_t n, std::size_t k,
                                                SampfordVariant variant) {
    if (k == 0 || k >= n) throw std::invalid_argument("needs 0 < k < n");
    std::map<VertexP, BPolynomial> weights;
    for_each_subset(n, k, [&](const IndexSet& ones) {
        std::vector<BMonomial> monomials;
        std::vector<bool> in_set(n, false);
        for (std::size_t i : ones) in_set[i] = true;
        // One monomial per choice of the doubled coordinate.
        for (std::size_t doubled = 0; doubled < n; ++doubled) {
            const bool doubled_in = in_set[doubled];
            if (variant == SampfordVariant::Minus ? !doubled_in : doubled_in) continue;
            BMonomial m{Rational(1), std::vector<std::uint32_t>(n, 0),
                        std::vector<std::uint32_t>(n, 0)};
            for (std::size_t i = 0; i < n; ++i) {
                if (in_set[i]) {
                    m.exp_one[i] = 1;
                } else {
                    m.exp_zero[i] = 1;
                }
            }
            if (variant == SampfordVariant::Minus) {
                m.exp_zero[doubled] += 1;  // extra (1 - x_i), i in S
            } else {
                m.exp_one[doubled] += 1;  // extra x_j, j outside S
            }
            monomials.push_back(std::move(m));
        }
        weights.emplace(subset_vertex(n, ones), BPolynomial(n, std::move(monomials)));
    });
    return weights;
}

RaceResult sample_noninteger(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                             NonIntegerVariant variant,
                             std::optional<std::uint64_t> round_budget) {
    if (spec.integral) throw std::invalid_argument("sampler requires non-integral alpha");
    const std::size_t n = spec.n, k = spec.k;
    const Rational fractional = spec.alpha - Rational(static_cast<int>(k));

    RaceResult result;
    const std::uint64_t flips_before = coins.flips_total();
    auto finish = [&](const IndexSet& ones, std::size_t fractional_slot) {
        VertexP v = subset_vertex(n, ones);
        v[fractional_slot] = fractional;
        result.flips = coins.flips_total() - flips_before;
        result.outcome = SampleOutcome{std::move(v), result.rounds, result.flips};
        return result;
    };

    // All vertices: a fractional slot plus a k-subset of the rest.
    std::vector<std::pair<std::size_t, IndexSet>> vertices;
    if (variant == NonIntegerVariant::V1) {
        for (std::size_t slot = 0; slot < n; ++slot) {
            IndexSet rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (i != slot) rest.push_back(i);
            }
            for_each_subset(n - 1, k, [&](const IndexSet& pick) {
                IndexSet ones;
                for (std::size_t t : pick) ones.push_back(rest[t]);
                vertices.emplace_back(slot, std::move(ones));
            });
        }
    }

    while (true) {
        if (round_budget && result.rounds >= *round_budget) {
            result.flips = coins.flips_total() - flips_before;
            return result;
        }
        ++result.rounds;
        if (variant == NonIntegerVariant::V1) {
            const auto& [slot, ones] = vertices[ext.uniform_index(vertices.size())];
            bool ok = true;
            for (std::size_t i : ones) {
                if (!coins.flip(i)) {
                    ok = false;
                    break;
                }
            }
            for (std::size_t i = 0; i < n && ok; ++i) {
                if (i == slot) continue;
                if (std::find(ones.begin(), ones.end(), i) != ones.end()) continue;
                ok = !coins.flip(i);
            }
            // Fractional slot last: a 1 then a 0.
            if (ok) ok = coins.flip(slot) && !coins.flip(slot);
            if (ok) return finish(ones, slot);
        } else {
            IndexSet successes;
            for (std::size_t i = 0; i < n; ++i) {
                if (coins.flip(i)) successes.push_back(i);
            }
            if (successes.size() != k + 1) continue;
            const std::size_t slot = successes[ext.uniform_index(successes.size())];
            if (coins.flip(slot)) continue;  // extra flip must come up 0
            IndexSet ones;
            for (std::size_t i : successes) {
                if (i != slot) ones.push_back(i);
            }
            return finish(ones, slot);
        }
    }
}

namespace {

RaceResult sampford_run(const KSubsetSpec& spec, SampfordVariant variant, CoinSource& coins,
                        ExternalRandomness& ext, std::optional<std::uint64_t> round_budget) {
    if (!spec.integral) throw std::invalid_argument("Sampford sampling requires integral alpha");
    const std::size_t n = spec.n, k = spec.k;
    if (k == 0 || k >= n) throw std::invalid_argument("needs 0 < k < n");
    const std::size_t keep = (variant == SampfordVariant::Minus) ? k : k + 1;

    RaceResult result;
    const std::uint64_t flips_before = coins.flips_total();
    while (true) {
        if (round_budget && result.rounds >= *round_budget) {
            result.flips = coins.flips_total() - flips_before;
            return result;
        }
        ++result.rounds;
        IndexSet successes;
        for (std::size_t i = 0; i < n; ++i) {
            if (coins.flip(i)) successes.push_back(i);
        }
        if (successes.size() != keep) continue;
        const std::size_t chosen = successes[ext.uniform_index(successes.size())];
        if (coins.flip(chosen)) continue;
        IndexSet ones;
        if (variant == SampfordVariant::Minus) {
            ones = successes;  // the re-flipped coordinate stays selected
        } else {
            for (std::size_t i : successes) {
                if (i != chosen) ones.push_back(i);
            }
        }
        result.flips = coins.flips_total() - flips_before;
        result.outcome =
            SampleOutcome{subset_vertex(n, ones), result.rounds, result.flips};
        return result;
    }
}

}  // namespace

RaceResult sampford_minus(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                          std::optional<std::uint64_t> round_budget) {
    return sampford_run(spec, SampfordVariant::Minus, coins, ext, round_budget);
}

RaceResult sampford_plus(const KSubsetSpec& spec, CoinSource& coins, ExternalRandomness& ext,
                         std::optional<std::uint64_t> round_budget) {
    return sampford_run(spec, SampfordVariant::Plus, coins, ext, round_budget);
}

Rational boundary_probe(const KSubsetSpec& spec, const VertexP& v_prime) {
    if (!spec.integral) throw std::invalid_argument("boundary probe is for integral k");
    if (v_prime.size() != spec.n) throw DimensionError("probe point length mismatch");
    const std::map<VertexP, BPolynomial> weights =
        (spec.k == 1 || spec.k + 1 == spec.n)
            ? strong_factory_extremes(spec.n, spec.k).weights
            : sampford_weights(spec.n, spec.k, SampfordVariant::Minus);
    Rational total(0);
    for (const auto& [v, p] : weights) total += evaluate(p, v_prime);
    return total;
}

}  // namespace bfactory
