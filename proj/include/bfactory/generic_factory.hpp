#pragma once

#include "bfactory/sampling.hpp"

#include <map>
#include <optional>
#include <string>

namespace bfactory {

enum class Provenance { Generic, Perturbed };

// A complete sampling recipe for P: one nonempty Bernstein weight polynomial
// per vertex, plus how the weights were obtained.
struct FactorySpec {
    AffineSubspace subspace;
    std::map<VertexP, BPolynomial> weights;
    Provenance provenance = Provenance::Generic;
    std::optional<RVector> perturbed_b;   // the generic b actually used
    std::optional<Rational> perturb_radius;
};

// Thrown when every perturbation attempt failed; carries the rejected draws.
struct PerturbationError : std::runtime_error {
    PerturbationError(const std::string& what, std::vector<RVector> failed)
        : std::runtime_error(what), failed_b(std::move(failed)) {}
    std::vector<RVector> failed_b;
};

// One single-monomial weight per valid partition:
//   |det W_S| * prod_{zeros}(1-x_i) * prod_{ones} x_i * prod_{basis} x_i(1-x_i),
// keyed by the bijectively corresponding vertex. Requires a generic subspace.
FactorySpec build_generic(const AffineSubspace& h);

// Direct rejection sampler for generic subspaces: uniform vertex, one coin
// per pinned coordinate, a (1,0) pair per basic coordinate, then acceptance
// |det W_S| / D with D = max over valid partitions. Distributionally
// identical to racing build_generic(h).
RaceResult algorithm1_sample(const AffineSubspace& h, CoinSource& coins, ExternalRandomness& ext,
                             std::optional<std::uint64_t> round_budget = std::nullopt);

// Factory for a non-generic subspace: draws a rational b_t in the given ball
// around b, requires (W, b_t) to be generic, maps each perturbed valid
// partition to its limit vertex under the original b, aggregates the weights
// per vertex, and certifies the result exactly (zero residual identity at
// random interior points). Failed attempts halve the radius. Also accepts a
// generic input, where the result reproduces build_generic.
FactorySpec build_perturbed(const AffineSubspace& h, const Rational& radius,
                            ExternalRandomness& ext, unsigned max_attempts = 12);

// Convenience: build_generic when the subspace is generic, otherwise
// build_perturbed with the given radius.
FactorySpec build_factory(const AffineSubspace& h, const Rational& radius,
                          ExternalRandomness& ext, unsigned max_attempts = 12);

// The two boundary-safe one-parameter families on the slice sum(x) = k:
// k = 1 uses x_i for vertex e_i, k = n-1 uses 1-x_i for the complement
// vertex. Both keep sampling at the vertices themselves.
FactorySpec strong_factory_extremes(std::size_t n, std::size_t k);

RaceResult race_sample(const FactorySpec& spec, CoinSource& coins, ExternalRandomness& ext,
                       std::optional<std::uint64_t> round_budget = std::nullopt);

}  // namespace bfactory
