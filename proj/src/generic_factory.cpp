#include "bfactory/generic_factory.hpp"

#include "bfactory/verifier.hpp"

#include <algorithm>

namespace bfactory {

namespace {

// The single monomial of the generic recipe for partition p.
BMonomial partition_monomial(const AffineSubspace& h, const Partition& p,
                             const Rational& det_abs) {
    BMonomial m{det_abs, std::vector<std::uint32_t>(h.n(), 0),
                std::vector<std::uint32_t>(h.n(), 0)};
    for (std::size_t i : p.zeros) m.exp_zero[i] = 1;
    for (std::size_t i : p.ones) m.exp_one[i] = 1;
    for (std::size_t i : p.basis) {
        m.exp_one[i] = 1;
        m.exp_zero[i] = 1;
    }
    return m;
}

}  // namespace

FactorySpec build_generic(const AffineSubspace& h) {
    if (!is_generic(h)) {
        throw NonGenericError("subspace is non-generic; use build_perturbed");
    }
    FactorySpec spec{h, {}, Provenance::Generic, std::nullopt, std::nullopt};
    for (const Partition& p : valid_partitions(h)) {
        const Rational d = abs(det(submatrix_cols(h.w(), p.basis)));
        const VertexP v = vertex_of_partition(h, p);
        spec.weights.emplace(v, BPolynomial(h.n(), {partition_monomial(h, p, d)}));
    }
    return spec;
}

RaceResult algorithm1_sample(const AffineSubspace& h, CoinSource& coins, ExternalRandomness& ext,
                             std::optional<std::uint64_t> round_budget) {
    if (!is_generic(h)) throw NonGenericError("algorithm1_sample requires a generic subspace");

    struct Candidate {
        VertexP vertex;
        Partition partition;
        Rational det_abs;
    };
    std::vector<Candidate> candidates;
    Rational max_det(0);
    for (const Partition& p : valid_partitions(h)) {
        Candidate c{vertex_of_partition(h, p), p, abs(det(submatrix_cols(h.w(), p.basis)))};
        max_det = std::max(max_det, c.det_abs);
        candidates.push_back(std::move(c));
    }
    if (candidates.empty()) throw std::domain_error("polytope has no vertices");

    RaceResult result;
    const std::uint64_t flips_before = coins.flips_total();
    while (true) {
        if (round_budget && result.rounds >= *round_budget) {
            result.flips = coins.flips_total() - flips_before;
            return result;
        }
        ++result.rounds;
        const Candidate& c = candidates[ext.uniform_index(candidates.size())];
        bool ok = true;
        for (std::size_t i : c.partition.zeros) {
            if (coins.flip(i)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (std::size_t i : c.partition.ones) {
                if (!coins.flip(i)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            for (std::size_t i : c.partition.basis) {
                if (!coins.flip(i) || coins.flip(i)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && ext.bernoulli(c.det_abs / max_det)) {
            result.flips = coins.flips_total() - flips_before;
            result.outcome = SampleOutcome{c.vertex, result.rounds, result.flips};
            return result;
        }
    }
}

namespace {

// Draws b + delta with delta uniform over rational points j/q of the radius
// ball, q = 2^20 * ceil(1/radius).
RVector perturbed_rhs(const RVector& b, const Rational& radius, ExternalRandomness& ext) {
    const BigInt denom_scale = -floor(-(Rational(1) / radius));  // ceil(1/radius)
    const BigInt q = BigInt(1 << 20) * denom_scale;
    const BigInt r_scaled = floor(radius * Rational(q));  // ball radius in 1/q units
    const std::int64_t bound = r_scaled.convert_to<std::int64_t>();
    const BigInt r2 = r_scaled * r_scaled;
    const std::size_t k = b.size();
    while (true) {
        std::vector<BigInt> j(k);
        BigInt norm2(0);
        for (std::size_t t = 0; t < k; ++t) {
            j[t] = BigInt(ext.uniform_int(-bound, bound));
            norm2 += j[t] * j[t];
        }
        if (norm2 > r2) continue;
        RVector out(b);
        for (std::size_t t = 0; t < k; ++t) out[t] += Rational(j[t]) / Rational(q);
        return out;
    }
}

}  // namespace

FactorySpec build_perturbed(const AffineSubspace& h, const Rational& radius,
                            ExternalRandomness& ext, unsigned max_attempts) {
    if (radius <= 0) throw std::invalid_argument("perturbation radius must be positive");
    const std::vector<VertexP> target_vertices = enumerate_vertices(h);
    if (target_vertices.empty()) throw std::domain_error("polytope has no vertices");

    std::vector<RVector> failed;
    Rational r = radius;
    for (unsigned attempt = 0; attempt < max_attempts; ++attempt, r /= 2) {
        const RVector b_t = perturbed_rhs(h.b(), r, ext);
        AffineSubspace perturbed(h.w(), b_t);
        if (!is_generic(perturbed)) {
            failed.push_back(b_t);
            continue;
        }

        // Aggregate the perturbed partition weights on their limit vertices,
        // which are re-solved against the original b (coordinates may land
        // exactly on 0 or 1 there).
        std::map<VertexP, std::vector<BMonomial>> grouped;
        bool attempt_ok = true;
        for (const Partition& p : valid_partitions(perturbed)) {
            VertexP limit;
            try {
                limit = vertex_of_partition(h, p);
            } catch (const std::domain_error&) {
                attempt_ok = false;  // limit vertex escaped the cube; radius too large
                break;
            }
            const Rational d = abs(det(submatrix_cols(h.w(), p.basis)));
            grouped[limit].push_back(partition_monomial(h, p, d));
        }
        // Limit vertices are always vertices of P, so matching counts means
        // every vertex received a nonempty weight.
        if (!attempt_ok || grouped.size() != target_vertices.size()) {
            failed.push_back(b_t);
            continue;
        }

        FactorySpec spec{h, {}, Provenance::Perturbed, b_t, r};
        for (auto& [v, monomials] : grouped) {
            spec.weights.emplace(v, BPolynomial(h.n(), std::move(monomials)));
        }
        if (verify_identity(spec, 32, ext).pass) return spec;
        failed.push_back(b_t);
    }
    throw PerturbationError("no perturbation draw produced a certified factory", failed);
}

FactorySpec build_factory(const AffineSubspace& h, const Rational& radius,
                          ExternalRandomness& ext, unsigned max_attempts) {
    if (is_generic(h)) return build_generic(h);
    return build_perturbed(h, radius, ext, max_attempts);
}

FactorySpec strong_factory_extremes(std::size_t n, std::size_t k) {
    if (n < 2 || (k != 1 && k != n - 1)) {
        throw std::invalid_argument("strong extremes exist for k = 1 and k = n-1 only");
    }
    RMatrix w(1, n);
    for (std::size_t i = 0; i < n; ++i) w(0, i) = 1;
    AffineSubspace h(std::move(w), {Rational(k)});

    FactorySpec spec{h, {}, Provenance::Generic, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < n; ++i) {
        VertexP v(n, Rational(k == 1 ? 0 : 1));
        v[i] = (k == 1) ? 1 : 0;
        BMonomial m{Rational(1), std::vector<std::uint32_t>(n, 0),
                    std::vector<std::uint32_t>(n, 0)};
        if (k == 1) {
            m.exp_one[i] = 1;  // x_i for vertex e_i
        } else {
            m.exp_zero[i] = 1;  // 1 - x_i for the complement vertex
        }
        spec.weights.emplace(std::move(v), BPolynomial(n, {std::move(m)}));
    }
    return spec;
}

RaceResult race_sample(const FactorySpec& spec, CoinSource& coins, ExternalRandomness& ext,
                       std::optional<std::uint64_t> round_budget) {
    return bernoulli_race(spec.weights, coins, ext, round_budget);
}

}  // namespace bfactory
