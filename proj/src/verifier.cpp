#include "bfactory/verifier.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bfactory {

RVector random_convex_combination(const std::vector<VertexP>& vertices, ExternalRandomness& ext) {
    if (vertices.empty()) throw std::invalid_argument("convex combination of nothing");
    const std::size_t n = vertices.front().size();
    std::vector<Rational> lambda(vertices.size());
    Rational total(0);
    for (auto& l : lambda) {
        l = Rational(ext.uniform_int(1, 1 << 16));
        total += l;
    }
    RVector x(n, Rational(0));
    for (std::size_t t = 0; t < vertices.size(); ++t) {
        const Rational w = lambda[t] / total;
        for (std::size_t i = 0; i < n; ++i) x[i] += w * vertices[t][i];
    }
    return x;
}

IdentityReport verify_identity_weights(const std::map<VertexP, BPolynomial>& weights,
                                       std::size_t num_points, ExternalRandomness& ext) {
    if (weights.empty()) throw std::invalid_argument("verify_identity on empty weight map");
    std::vector<VertexP> vertices;
    vertices.reserve(weights.size());
    for (const auto& [v, p] : weights) vertices.push_back(v);
    const std::size_t n = vertices.front().size();

    IdentityReport report;
    for (std::size_t t = 0; t < num_points; ++t) {
        PointCheck check;
        check.x = random_convex_combination(vertices, ext);
        check.residual.assign(n, Rational(0));
        check.weight_sum = 0;
        for (const auto& [v, p] : weights) {
            const Rational pv = evaluate(p, check.x);
            check.weight_sum += pv;
            if (pv == 0) continue;
            for (std::size_t i = 0; i < n; ++i) {
                check.residual[i] += pv * (v[i] - check.x[i]);
            }
        }
        for (const Rational& r : check.residual) {
            if (r != 0) report.residuals_zero = false;
        }
        if (check.weight_sum <= 0) report.sums_positive = false;
        report.points.push_back(std::move(check));
    }
    report.pass = report.residuals_zero && report.sums_positive;
    return report;
}

IdentityReport verify_identity(const FactorySpec& spec, std::size_t num_points,
                               ExternalRandomness& ext) {
    return verify_identity_weights(spec.weights, num_points, ext);
}

namespace {

// Signed parallelotope: offset + open zonotope of the generator columns.
struct SignedRegion {
    RMatrix generators;  // k x k, possibly singular (empty region)
    RVector offset;      // zero vector or one of the family columns
    int sign = 0;        // +1 / -1; 0 means the region vanished
    Rational volume;     // |det generators|
};

enum class Membership { Inside, Outside, Boundary };

Membership region_membership(const SignedRegion& region, const RVector& q) {
    if (region.volume == 0) return Membership::Outside;
    RVector shifted(q);
    for (std::size_t i = 0; i < q.size(); ++i) shifted[i] -= region.offset[i];
    const RVector lambda = solve(region.generators, shifted);
    bool boundary = false;
    for (const Rational& l : lambda) {
        if (l < 0 || l > 1) return Membership::Outside;
        if (l == 0 || l == 1) boundary = true;
    }
    return boundary ? Membership::Boundary : Membership::Inside;
}

}  // namespace

ZonotopeReport zonotope_identity_check(const RMatrix& w, const IndexSet& s_prime, std::size_t j,
                                       std::size_t num_points, ExternalRandomness& ext) {
    const std::size_t k = w.rows();
    if (s_prime.size() != k) throw DimensionError("s_prime must have k elements");
    if (std::find(s_prime.begin(), s_prime.end(), j) != s_prime.end()) {
        throw DimensionError("j must lie outside s_prime");
    }
    const RMatrix w_s = submatrix_cols(w, s_prime);
    if (det(w_s) == 0) throw SingularMatrixError("zonotope check requires det W_S' != 0");

    // Column family I = s_prime + {j}; by convention sigma_j = -1.
    std::vector<std::size_t> family(s_prime);
    family.push_back(j);
    std::vector<int> sigma(family.size());
    for (std::size_t t = 0; t + 1 < family.size(); ++t) {
        sigma[t] = sigma_sign(w, s_prime, family[t], j);
    }
    sigma.back() = -1;

    // For member i the generators are the family columns with w^i replaced
    // by w^j (for i = j this is just W_S'). The base copy takes sign
    // sigma_i, the copy shifted by w^i takes -sigma_i.
    std::vector<SignedRegion> regions;
    const RVector zero_offset(k, Rational(0));
    for (std::size_t t = 0; t < family.size(); ++t) {
        RMatrix gens = w_s;
        if (family[t] != j) {
            const auto pos =
                std::find(s_prime.begin(), s_prime.end(), family[t]) - s_prime.begin();
            gens = replace_column(w_s, static_cast<std::size_t>(pos), w.col(j));
        }
        const Rational vol = abs(det(gens));
        SignedRegion base{gens, zero_offset, sigma[t], vol};
        SignedRegion shifted{gens, w.col(family[t]), -sigma[t], vol};
        regions.push_back(std::move(base));
        regions.push_back(std::move(shifted));
    }

    ZonotopeReport report;
    report.total_volume = 0;
    report.positive_volume = 0;
    report.negative_volume = 0;

    // Zonotope volume via all k-subsets of the family (one column dropped).
    for (std::size_t drop = 0; drop < family.size(); ++drop) {
        IndexSet subset;
        for (std::size_t t = 0; t < family.size(); ++t) {
            if (t != drop) subset.push_back(family[t]);
        }
        std::sort(subset.begin(), subset.end());
        report.total_volume += abs(det(submatrix_cols(w, subset)));
    }
    for (const SignedRegion& r : regions) {
        if (r.sign > 0) report.positive_volume += r.volume;
        if (r.sign < 0) report.negative_volume += r.volume;
    }
    report.volumes_match = (report.positive_volume == report.total_volume) &&
                           (report.negative_volume == report.total_volume);

    for (std::size_t t = 0; t < num_points; ++t) {
        // Random rational point strictly inside the spanned zonotope.
        RVector q(k, Rational(0));
        for (std::size_t idx : family) {
            const Rational lambda = Rational(ext.uniform_int(1, (1 << 16) - 1)) / (1 << 16);
            for (std::size_t r = 0; r < k; ++r) q[r] += lambda * w(r, idx);
        }
        int positives = 0, negatives = 0;
        bool boundary = false;
        for (const SignedRegion& region : regions) {
            if (region.sign == 0) continue;
            switch (region_membership(region, q)) {
                case Membership::Inside:
                    (region.sign > 0 ? positives : negatives)++;
                    break;
                case Membership::Boundary:
                    boundary = true;
                    break;
                case Membership::Outside:
                    break;
            }
            if (boundary) break;
        }
        if (boundary) {
            ++report.boundary_skipped;
            continue;
        }
        ++report.points_tested;
        if (positives != negatives || positives > 1) ++report.balance_violations;
    }
    report.pass = report.volumes_match && report.balance_violations == 0;
    return report;
}

StatReport stat_check_sampler(const std::function<RaceResult()>& draw,
                              const std::map<VertexP, BPolynomial>& weights, const RVector& x,
                              std::size_t n) {
    if (weights.empty()) throw std::invalid_argument("stat check requires a weight family");
    const std::size_t dim = x.size();

    // Exact target distribution at x. A vanishing family (possible at
    // boundary points) leaves no target; draws still run so budget
    // exhaustion gets recorded rather than raised.
    std::vector<VertexP> vertices;
    std::vector<Rational> probs;
    Rational total(0);
    for (const auto& [v, p] : weights) {
        vertices.push_back(v);
        probs.push_back(evaluate(p, x));
        total += probs.back();
    }
    const bool target_defined = total > 0;
    if (target_defined) {
        for (auto& p : probs) p /= total;
    }

    StatReport report;
    report.requested = n;
    report.empirical_mean.assign(dim, Rational(0));

    std::map<VertexP, std::uint64_t> counts;
    std::vector<SampleOutcome> outcomes;
    outcomes.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        RaceResult r = draw();
        report.total_rounds += r.rounds;
        report.total_flips += r.flips;
        if (r.exhausted()) {
            ++report.budget_exhausted;
            continue;
        }
        ++report.completed;
        ++counts[r.outcome->vertex];
        for (std::size_t i = 0; i < dim; ++i) {
            report.empirical_mean[i] += r.outcome->vertex[i];
        }
        outcomes.push_back(*r.outcome);
    }
    if (report.completed == 0 || !target_defined) return report;
    for (auto& m : report.empirical_mean) m /= Rational(report.completed);

    // Per-coordinate z-scores against the exact distribution's variance.
    const double sqrt_n = std::sqrt(static_cast<double>(report.completed));
    for (std::size_t i = 0; i < dim; ++i) {
        Rational mean(0), second(0);
        for (std::size_t t = 0; t < vertices.size(); ++t) {
            mean += probs[t] * vertices[t][i];
            second += probs[t] * vertices[t][i] * vertices[t][i];
        }
        const Rational variance = second - mean * mean;
        const double sigma = std::sqrt(variance.convert_to<double>());
        const Rational deviation = report.empirical_mean[i] - x[i];
        if (sigma == 0.0) {
            report.z_scores.push_back(deviation == 0 ? 0.0
                                                     : std::numeric_limits<double>::infinity());
        } else {
            report.z_scores.push_back(deviation.convert_to<double>() * sqrt_n / sigma);
        }
    }

    // Chi-square over vertex frequencies vs the exact distribution.
    double chi = 0.0;
    std::size_t cells = 0;
    for (std::size_t t = 0; t < vertices.size(); ++t) {
        const double expected =
            probs[t].convert_to<double>() * static_cast<double>(report.completed);
        if (expected == 0.0) continue;
        ++cells;
        const auto it = counts.find(vertices[t]);
        const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        chi += (observed - expected) * (observed - expected) / expected;
    }
    report.chi_square = chi;
    report.dof = cells > 1 ? cells - 1 : 0;
    report.p_value =
        report.dof == 0 ? 1.0 : boost::math::gamma_q(static_cast<double>(report.dof) / 2.0,
                                                     chi / 2.0);

    std::vector<std::uint64_t> thresholds;
    if (!outcomes.empty()) {
        std::vector<std::uint64_t> flips;
        flips.reserve(outcomes.size());
        for (const auto& s : outcomes) flips.push_back(s.flips);
        std::sort(flips.begin(), flips.end());
        for (double quantile : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
            thresholds.push_back(
                flips[static_cast<std::size_t>(quantile * (flips.size() - 1))]);
        }
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        report.tail = tail_fit(outcomes, thresholds);
    }
    return report;
}

StatReport stat_check(const FactorySpec& spec, const RVector& x, std::size_t n,
                      std::uint64_t seed, std::optional<std::uint64_t> round_budget) {
    SimulatedCoins coins(x, seed);
    ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
    return stat_check_sampler(
        [&] { return bernoulli_race(spec.weights, coins, ext, round_budget); }, spec.weights, x,
        n);
}

}  // namespace bfactory
