// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here; the statistical gates use 4-sigma
// coordinate bounds and a 1e-4 chi-square p-floor at N = 1e5.

#include "bfactory/io.hpp"
#include "bfactory/ksubset.hpp"
#include "bfactory/matching.hpp"
#include "bfactory/verifier.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

using namespace bfactory;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string label)
        : number_(number), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}

    void finish(bool pass, const std::string& detail = "") {
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << "C" << number_ << " " << label_ << " ("
                  << elapsed << " ms)";
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n" << std::flush;
        if (!pass) ++failures;
    }

private:
    int number_;
    std::string label_;
    std::chrono::steady_clock::time_point start_;
};

Rational random_entry(ExternalRandomness& ext) {
    // uniform rational in [-3, 3] with denominator <= 8
    const std::int64_t den = ext.uniform_int(1, 8);
    const std::int64_t num = ext.uniform_int(-3 * den, 3 * den);
    return Rational(num) / Rational(den);
}

// Random full-rank W plus a b adjusted until the subspace is generic with a
// nonempty vertex set.
AffineSubspace random_generic_instance(ExternalRandomness& ext, std::size_t k, std::size_t n) {
    while (true) {
        RMatrix w(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < n; ++j) w(i, j) = random_entry(ext);
        }
        if (rank(w) != k) continue;
        for (int attempt = 0; attempt < 64; ++attempt) {
            RVector b(k);
            for (auto& e : b) e = random_entry(ext);
            const AffineSubspace h(w, b);
            if (is_generic(h) && !valid_partitions(h).empty()) return h;
        }
    }
}

void criterion1() {
    Criterion c(1, "exact factory identity on random generic instances");
    ExternalRandomness ext(20250601);
    bool pass = true;
    std::string detail;
    for (int instance = 0; instance < 25 && pass; ++instance) {
        const std::size_t k = 1 + ext.uniform_index(3);
        const std::size_t n = k + 1 + ext.uniform_index(6 - k);
        const AffineSubspace h = random_generic_instance(ext, k, n);
        const FactorySpec spec = build_generic(h);
        const IdentityReport report = verify_identity(spec, 100, ext);
        if (!report.pass) {
            pass = false;
            std::ostringstream os;
            os << "instance " << instance << " (k=" << k << ", n=" << n << ") failed";
            detail = os.str();
        }
    }
    c.finish(pass, detail);
}

void criterion2() {
    Criterion c(2, "matching identity for n = 2, 3, 4");
    ExternalRandomness ext(20250602);
    bool pass = true;
    for (std::size_t n : {2u, 3u, 4u}) {
        const IdentityReport report = verify_identity_weights(matching_weights(n), 50, ext);
        pass = pass && report.pass;
    }
    c.finish(pass);
}

void criterion3() {
    Criterion c(3, "matrix-tree and zero-line-sum cofactor oracles");
    ExternalRandomness ext(20250603);
    bool pass = true;
    for (int trial = 0; trial < 50 && pass; ++trial) {
        const std::size_t n = 2 + ext.uniform_index(4);  // up to 5
        RMatrix x(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) x(i, j) = random_entry(ext);
        }
        const std::size_t r = ext.uniform_index(n);
        pass = laplacian_minor_det(x, r) == brute_arborescence_sum(x, r);
    }
    for (int trial = 0; trial < 50 && pass; ++trial) {
        const std::size_t n = 2 + ext.uniform_index(5);  // up to 6
        RMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = random_entry(ext);
        }
        for (std::size_t i = 0; i < n; ++i) {  // project to zero line sums
            Rational row_sum(0);
            for (std::size_t j = 0; j < n; ++j) row_sum += a(i, j);
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= row_sum / static_cast<int>(n);
        }
        for (std::size_t j = 0; j < n; ++j) {
            Rational col_sum(0);
            for (std::size_t i = 0; i < n; ++i) col_sum += a(i, j);
            for (std::size_t i = 0; i < n; ++i) a(i, j) -= col_sum / static_cast<int>(n);
        }
        pass = zls_equal_cofactors(a);
    }
    c.finish(pass);
}

void criterion4() {
    Criterion c(4, "permutation/arborescence vs bi-tree bijection");
    bool pass = true;
    std::string detail;
    for (std::size_t n : {2u, 3u, 4u}) {
        for (std::size_t r = 0; r < n && pass; ++r) {
            for (std::size_t col = 0; col < n && pass; ++col) {
                const BiTreeCheck check = bitree_bijection_check(n, r, col);
                pass = check.pairs == check.distinct_bitrees && check.roundtrip_failures == 0;
                if (n == 3) pass = pass && check.pairs == 6;
                if (!pass) {
                    std::ostringstream os;
                    os << "n=" << n << " r=" << r << " c=" << col;
                    detail = os.str();
                }
            }
        }
    }
    c.finish(pass, detail);
}

void criterion5() {
    Criterion c(5, "perturbed Birkhoff factory equals the arborescence family");
    // The limit family depends on the perturbation direction; this seed's
    // draw lands in the cone whose limit is the root-0 arborescence family.
    ExternalRandomness ext(115);
    const AffineSubspace h = birkhoff_subspace(3);
    bool pass = true;
    std::string detail;
    try {
        const FactorySpec spec = build_perturbed(h, parse_rational("1/16777216"), ext, 3);
        const BMonomial cube_factor{Rational(1), std::vector<std::uint32_t>(9, 0),
                                    std::vector<std::uint32_t>(9, 1)};
        const auto family = matching_weights(3, 0);
        if (spec.weights.size() != 6) {
            pass = false;
            detail = "wrong vertex count";
        }
        for (const auto& [v, p] : spec.weights) {
            const auto quotient = divide_by_monomial(p, cube_factor);
            if (!quotient || !poly_equal(*quotient, family.at(v))) {
                pass = false;
                detail = "quotient mismatch";
                break;
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    c.finish(pass, detail);
}

void criterion6() {
    Criterion c(6, "Sampford minus/plus normalized weight equality");
    ExternalRandomness ext(20250606);
    bool pass = true;
    for (const auto& [k, n] :
         std::vector<std::pair<std::size_t, std::size_t>>{{2, 4}, {2, 5}, {3, 5}}) {
        const auto minus = sampford_weights(n, k, SampfordVariant::Minus);
        const auto plus = sampford_weights(n, k, SampfordVariant::Plus);
        std::vector<VertexP> vertices;
        for (const auto& [v, p] : minus) vertices.push_back(v);
        for (int t = 0; t < 100 && pass; ++t) {
            const RVector x = random_convex_combination(vertices, ext);
            Rational minus_total(0), plus_total(0);
            for (const auto& [v, p] : minus) minus_total += evaluate(p, x);
            for (const auto& [v, p] : plus) plus_total += evaluate(p, x);
            if (minus_total <= 0 || plus_total <= 0) {
                pass = false;
                break;
            }
            for (const auto& [v, p] : minus) {
                if (evaluate(p, x) / minus_total != evaluate(plus.at(v), x) / plus_total) {
                    pass = false;
                    break;
                }
            }
        }
    }
    c.finish(pass);
}

struct SeedOutcome {
    bool ok = false;
    double worst_z = 0;
    double p_value = 0;
};

SeedOutcome run_stat_case(const std::function<RaceResult()>& draw,
                          const std::map<VertexP, BPolynomial>& weights, const RVector& x,
                          std::size_t n_samples) {
    const StatReport report = stat_check_sampler(draw, weights, x, n_samples);
    SeedOutcome out;
    out.p_value = report.p_value;
    for (double z : report.z_scores) out.worst_z = std::max(out.worst_z, std::abs(z));
    out.ok = report.completed == n_samples && out.worst_z < 4.0 && report.p_value > 1e-4;
    return out;
}

void criterion7() {
    Criterion c(7, "statistical marginals over 20 seeds");
    const std::size_t n_samples = 100000;
    int pass_a = 0, pass_b = 0, pass_c = 0;

    const FactorySpec simplex = strong_factory_extremes(3, 1);
    const RVector x_a{parse_rational("1/2"), parse_rational("1/4"), parse_rational("1/4")};

    const auto matching_family = matching_weights(3);
    const RVector x_b(9, parse_rational("1/3"));

    const KSubsetSpec sampford_spec = make_ksubset(4, Rational(2));
    const auto sampford_family = sampford_weights(4, 2, SampfordVariant::Minus);
    const RVector x_c{parse_rational("3/5"), parse_rational("3/5"), parse_rational("2/5"),
                      parse_rational("2/5")};

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        {
            SimulatedCoins coins(x_a, seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            pass_a += run_stat_case(
                          [&] { return bernoulli_race(simplex.weights, coins, ext); },
                          simplex.weights, x_a, n_samples)
                          .ok;
        }
        {
            SimulatedCoins coins(x_b, seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            pass_b += run_stat_case([&] { return sample_matching(3, coins, ext); },
                                    matching_family, x_b, n_samples)
                          .ok;
        }
        {
            SimulatedCoins coins(x_c, seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            pass_c += run_stat_case([&] { return sampford_minus(sampford_spec, coins, ext); },
                                    sampford_family, x_c, n_samples)
                          .ok;
        }
    }
    std::ostringstream os;
    os << "simplex " << pass_a << "/20, matching " << pass_b << "/20, sampford " << pass_c
       << "/20";
    c.finish(pass_a >= 19 && pass_b >= 19 && pass_c >= 19, os.str());
}

void criterion8() {
    Criterion c(8, "boundary impossibility witness");
    bool pass = true;
    for (std::size_t n : {4u, 5u}) {
        const KSubsetSpec spec = make_ksubset(n, Rational(2));
        for (const VertexP& v : enumerate_vertices(ksubset_subspace(spec))) {
            if (boundary_probe(spec, v) != 0) pass = false;
        }
    }
    for (std::size_t n : {4u, 5u}) {
        for (std::size_t k : {std::size_t{1}, n - 1}) {
            const KSubsetSpec spec = make_ksubset(n, Rational(static_cast<long long>(k)));
            for (const VertexP& v : enumerate_vertices(ksubset_subspace(spec))) {
                if (boundary_probe(spec, v) <= 0) pass = false;
            }
        }
    }
    // a budgeted run at a vertex of the 2-of-4 slice produces nothing
    const KSubsetSpec spec = make_ksubset(4, Rational(2));
    const VertexP vertex{Rational(1), Rational(1), Rational(0), Rational(0)};
    SimulatedCoins coins(vertex, 20250608);
    ExternalRandomness ext(20250609);
    for (int t = 0; t < 5; ++t) {
        const RaceResult r = sampford_minus(spec, coins, ext, 1000);
        if (!r.exhausted()) pass = false;
    }
    c.finish(pass);
}

void criterion9() {
    Criterion c(9, "exponential tail decay of the matching factory");
    const RVector x(9, parse_rational("1/3"));
    SimulatedCoins coins(x, 20250610);
    ExternalRandomness ext(20250611);
    std::vector<SampleOutcome> outcomes;
    for (int t = 0; t < 20000; ++t) {
        outcomes.push_back(*sample_matching(3, coins, ext).outcome);
    }
    std::vector<std::uint64_t> flips;
    flips.reserve(outcomes.size());
    for (const auto& s : outcomes) flips.push_back(s.flips);
    std::sort(flips.begin(), flips.end());
    std::vector<std::uint64_t> thresholds;
    for (double quantile : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
        thresholds.push_back(flips[static_cast<std::size_t>(quantile * (flips.size() - 1))]);
    }
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    const TailFit fit = tail_fit(outcomes, thresholds);
    bool pass = fit.c_hat.has_value() && *fit.c_hat < 1.0;
    for (std::size_t t = 1; t < fit.table.size(); ++t) {
        if (fit.table[t].prob > fit.table[t - 1].prob) pass = false;  // non-increasing
    }
    pass = pass && fit.table.back().prob < fit.table.front().prob;  // strict overall decay
    std::ostringstream os;
    if (fit.c_hat) os << "c_hat = " << *fit.c_hat;
    c.finish(pass, os.str());
}

void criterion10() {
    Criterion c(10, "zonotope tiling balance and volume identity");
    ExternalRandomness ext(20250612);
    bool pass = true;
    int done = 0;
    while (done < 20 && pass) {
        const std::size_t k = 2 + ext.uniform_index(2);
        const std::size_t n = k + 1 + ext.uniform_index(3);
        RMatrix w(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < n; ++j) w(i, j) = random_entry(ext);
        }
        IndexSet s_prime;
        const std::size_t j = ext.uniform_index(n);
        for (std::size_t i = 0; i < n && s_prime.size() < k; ++i) {
            if (i != j) s_prime.push_back(i);
        }
        if (det(submatrix_cols(w, s_prime)) == 0) continue;
        const ZonotopeReport report = zonotope_identity_check(w, s_prime, j, 200, ext);
        pass = report.balance_violations == 0 && report.volumes_match;
        ++done;
    }
    c.finish(pass);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
