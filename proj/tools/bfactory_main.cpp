// Command-line front end: problem I/O, factory building, sampling runs,
// verification suites, and experiment tables.
//
// Exit codes: 0 success/pass, 1 verification failure, 2 input error,
// 3 round budget exhausted.

#include "bfactory/io.hpp"
#include "bfactory/ksubset.hpp"
#include "bfactory/matching.hpp"
#include "bfactory/verifier.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace bfactory;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device entropy;
    const std::uint64_t chosen =
        (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    std::cerr << "seed: " << chosen << "\n";
    return chosen;
}

RVector load_point(const std::string& path, std::size_t expected_n) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    RVector x;
    if (j.is_array()) {
        x = rvector_from_json(j);
    } else if (j.contains("x")) {
        x = rvector_from_json(j.at("x"));
    } else {
        throw InputError(path + " must be an array or contain an \"x\" field");
    }
    if (x.size() != expected_n) throw InputError("point has the wrong dimension");
    for (const auto& c : x) {
        if (c < 0 || c > 1) throw InputError("point must lie in [0,1]^n");
    }
    return x;
}

RMatrix load_square_matrix(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    const RMatrix m = rmatrix_from_json(j.is_array() ? j : j.at("x"));
    if (m.rows() != n || m.cols() != n) throw InputError("matrix has the wrong shape");
    return m;
}

void emit(const json& j, bool as_json, const std::string& tsv) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << tsv;
    }
}

// Streams per-sample rows and a trailing summary; returns the exit code.
int run_sampling(const std::function<RaceResult()>& draw, std::size_t n_samples,
                 std::size_t dim) {
    std::cout << "sample\tvertex\trounds\tflips\n";
    RVector sum(dim, Rational(0));
    std::uint64_t exhausted = 0, total_flips = 0, total_rounds = 0;
    for (std::size_t t = 0; t < n_samples; ++t) {
        const RaceResult r = draw();
        total_flips += r.flips;
        total_rounds += r.rounds;
        if (r.exhausted()) {
            ++exhausted;
            std::cout << t << "\t-\t" << r.rounds << "\t" << r.flips << "\n";
            continue;
        }
        std::cout << t << "\t";
        for (std::size_t i = 0; i < dim; ++i) {
            if (i) std::cout << ",";
            std::cout << to_string(r.outcome->vertex[i]);
            sum[i] += r.outcome->vertex[i];
        }
        std::cout << "\t" << r.outcome->rounds << "\t" << r.outcome->flips << "\n";
    }
    const std::uint64_t completed = n_samples - exhausted;
    std::cout << "# completed\t" << completed << "/" << n_samples << "\n";
    std::cout << "# total_rounds\t" << total_rounds << "\ttotal_flips\t" << total_flips << "\n";
    if (completed > 0) {
        std::cout << "# mean";
        for (std::size_t i = 0; i < dim; ++i) {
            std::cout << "\t" << to_string(sum[i] / Rational(completed));
        }
        std::cout << "\n";
    }
    return exhausted > 0 ? kExitBudget : kExitPass;
}

int run(int argc, char** argv) {
    CLI::App app{"Exact Bernoulli-factory sampling of polytope vertices"};
    app.require_subcommand(1);

    auto* cmd_vertices = app.add_subcommand("vertices", "enumerate the vertices of a problem");
    std::string vertices_path;
    cmd_vertices->add_option("problem", vertices_path)->required();

    auto* cmd_build = app.add_subcommand("build", "build a factory (generic or perturbed)");
    std::string build_path, build_radius = "1/1024", build_out;
    std::optional<std::uint64_t> build_seed;
    cmd_build->add_option("problem", build_path)->required();
    cmd_build->add_option("--perturb-radius", build_radius);
    cmd_build->add_option("--seed", build_seed);
    cmd_build->add_option("--out", build_out);

    auto* cmd_sample = app.add_subcommand("sample", "draw vertices from a factory");
    std::string sample_factory, sample_x;
    std::size_t sample_n = 1000;
    std::optional<std::uint64_t> sample_seed, sample_budget;
    cmd_sample->add_option("factory", sample_factory)->required();
    cmd_sample->add_option("--x", sample_x)->required();
    cmd_sample->add_option("--n-samples", sample_n);
    cmd_sample->add_option("--seed", sample_seed);
    cmd_sample->add_option("--round-budget", sample_budget);

    auto* cmd_verify = app.add_subcommand("verify", "exact identity certificate for a factory");
    std::string verify_factory;
    std::size_t verify_points = 100;
    std::optional<std::uint64_t> verify_seed;
    bool verify_json = false;
    cmd_verify->add_option("factory", verify_factory)->required();
    cmd_verify->add_option("--points", verify_points);
    cmd_verify->add_option("--seed", verify_seed);
    cmd_verify->add_flag("--json", verify_json);

    auto* cmd_stats = app.add_subcommand("stats", "statistical acceptance report");
    std::string stats_factory, stats_x;
    std::size_t stats_n = 100000;
    std::optional<std::uint64_t> stats_seed, stats_budget;
    bool stats_json = false;
    cmd_stats->add_option("factory", stats_factory)->required();
    cmd_stats->add_option("--x", stats_x)->required();
    cmd_stats->add_option("--n-samples", stats_n);
    cmd_stats->add_option("--seed", stats_seed);
    cmd_stats->add_option("--round-budget", stats_budget);
    cmd_stats->add_flag("--json", stats_json);

    auto* cmd_matching = app.add_subcommand("matching", "perfect matching sampler");
    std::size_t matching_n = 3;
    std::string matching_x;
    std::size_t matching_samples = 1000;
    std::optional<std::uint64_t> matching_seed, matching_budget;
    cmd_matching->add_option("--n", matching_n)->required();
    cmd_matching->add_option("--x", matching_x)->required();
    cmd_matching->add_option("--n-samples", matching_samples);
    cmd_matching->add_option("--seed", matching_seed);
    cmd_matching->add_option("--round-budget", matching_budget);

    auto* cmd_ksubset = app.add_subcommand("ksubset", "k-subset / Sampford samplers");
    std::size_t ks_n = 4;
    std::string ks_alpha, ks_variant = "minus", ks_x;
    std::optional<std::size_t> ks_k;
    std::size_t ks_samples = 1000;
    std::optional<std::uint64_t> ks_seed, ks_budget;
    cmd_ksubset->add_option("--n", ks_n)->required();
    cmd_ksubset->add_option("--k", ks_k);
    cmd_ksubset->add_option("--alpha", ks_alpha);
    cmd_ksubset->add_option("--variant", ks_variant)
        ->check(CLI::IsMember({"minus", "plus", "v1", "v2"}));
    cmd_ksubset->add_option("--x", ks_x)->required();
    cmd_ksubset->add_option("--n-samples", ks_samples);
    cmd_ksubset->add_option("--seed", ks_seed);
    cmd_ksubset->add_option("--round-budget", ks_budget);

    auto* cmd_zono = app.add_subcommand("zonotope-check", "signed parallelotope tiling check");
    std::string zono_path, zono_sprime;
    std::size_t zono_j = 0, zono_points = 200;
    std::optional<std::uint64_t> zono_seed;
    bool zono_json = false;
    cmd_zono->add_option("problem", zono_path)->required();
    cmd_zono->add_option("--sprime", zono_sprime)->required();
    cmd_zono->add_option("--j", zono_j)->required();
    cmd_zono->add_option("--points", zono_points);
    cmd_zono->add_option("--seed", zono_seed);
    cmd_zono->add_flag("--json", zono_json);

    auto* cmd_reduce = app.add_subcommand("row-reduce", "full-rank row basis of (W|b)");
    std::string reduce_path;
    cmd_reduce->add_option("problem", reduce_path)->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_vertices->parsed()) {
        const ProblemFile p = load_problem(vertices_path);
        validate_hidden_point(p);
        const AffineSubspace h(p.w, p.b);
        const auto vertices = enumerate_vertices(h);
        json out;
        out["n"] = h.n();
        out["k"] = h.k();
        out["generic"] = is_generic(h);
        out["count"] = vertices.size();
        json list = json::array();
        for (const auto& v : vertices) list.push_back(rvector_to_json(v));
        out["vertices"] = std::move(list);
        std::cout << out.dump(2) << "\n";
        return kExitPass;
    }

    if (cmd_build->parsed()) {
        const ProblemFile p = load_problem(build_path);
        validate_hidden_point(p);
        const AffineSubspace h(p.w, p.b);
        ExternalRandomness ext(resolve_seed(build_seed));
        const FactorySpec spec = build_factory(h, parse_rational(build_radius), ext);
        const json out = factory_to_json(spec);
        if (build_out.empty()) {
            std::cout << out.dump(2) << "\n";
        } else {
            std::ofstream file(build_out);
            if (!file) throw InputError("cannot write " + build_out);
            file << out.dump(2) << "\n";
        }
        return kExitPass;
    }

    if (cmd_sample->parsed()) {
        const FactorySpec spec = load_factory(sample_factory);
        const RVector x = load_point(sample_x, spec.subspace.n());
        const std::uint64_t seed = resolve_seed(sample_seed);
        SimulatedCoins coins(x, seed);
        ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
        return run_sampling(
            [&] { return bernoulli_race(spec.weights, coins, ext, sample_budget); }, sample_n,
            spec.subspace.n());
    }

    if (cmd_verify->parsed()) {
        const FactorySpec spec = load_factory(verify_factory);
        ExternalRandomness ext(resolve_seed(verify_seed));
        const IdentityReport report = verify_identity(spec, verify_points, ext);
        emit(identity_report_to_json(report), verify_json, identity_report_to_tsv(report));
        return report.pass ? kExitPass : kExitVerifyFail;
    }

    if (cmd_stats->parsed()) {
        const FactorySpec spec = load_factory(stats_factory);
        const RVector x = load_point(stats_x, spec.subspace.n());
        const StatReport report =
            stat_check(spec, x, stats_n, resolve_seed(stats_seed), stats_budget);
        emit(stat_report_to_json(report), stats_json, stat_report_to_tsv(report));
        return report.budget_exhausted > 0 ? kExitBudget : kExitPass;
    }

    if (cmd_matching->parsed()) {
        const RMatrix x = load_square_matrix(matching_x, matching_n);
        RVector flat(matching_n * matching_n);
        for (std::size_t i = 0; i < matching_n; ++i) {
            for (std::size_t j = 0; j < matching_n; ++j) {
                const Rational& c = x(i, j);
                if (c < 0 || c > 1) throw InputError("matrix entries must lie in [0,1]");
                flat[i * matching_n + j] = c;
            }
        }
        for (std::size_t i = 0; i < matching_n; ++i) {
            Rational row(0), col(0);
            for (std::size_t j = 0; j < matching_n; ++j) {
                row += x(i, j);
                col += x(j, i);
            }
            if (row != 1 || col != 1) throw InputError("matrix must be doubly stochastic");
        }
        const std::uint64_t seed = resolve_seed(matching_seed);
        SimulatedCoins coins(flat, seed);
        ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
        return run_sampling(
            [&] { return sample_matching(matching_n, coins, ext, matching_budget); },
            matching_samples, matching_n * matching_n);
    }

    if (cmd_ksubset->parsed()) {
        Rational alpha;
        if (!ks_alpha.empty()) {
            alpha = parse_rational(ks_alpha);
        } else if (ks_k) {
            alpha = Rational(static_cast<long long>(*ks_k));
        } else {
            throw InputError("ksubset needs --k or --alpha");
        }
        const KSubsetSpec spec = make_ksubset(ks_n, alpha);
        const RVector x = load_point(ks_x, ks_n);
        Rational total(0);
        for (const auto& c : x) total += c;
        if (total != alpha) throw InputError("x must lie on the slice sum(x) = alpha");
        const std::uint64_t seed = resolve_seed(ks_seed);
        SimulatedCoins coins(x, seed);
        ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
        std::function<RaceResult()> draw;
        if (spec.integral) {
            if (ks_variant == "v1" || ks_variant == "v2") {
                throw InputError("v1/v2 are the non-integral variants; use minus/plus");
            }
            const SampfordVariant variant =
                ks_variant == "plus" ? SampfordVariant::Plus : SampfordVariant::Minus;
            draw = [&, variant] {
                return variant == SampfordVariant::Plus
                           ? sampford_plus(spec, coins, ext, ks_budget)
                           : sampford_minus(spec, coins, ext, ks_budget);
            };
        } else {
            if (ks_variant == "minus" || ks_variant == "plus") {
                throw InputError("minus/plus are the integral variants; use v1/v2");
            }
            const NonIntegerVariant variant =
                ks_variant == "v2" ? NonIntegerVariant::V2 : NonIntegerVariant::V1;
            draw = [&, variant] {
                return sample_noninteger(spec, coins, ext, variant, ks_budget);
            };
        }
        return run_sampling(draw, ks_samples, ks_n);
    }

    if (cmd_zono->parsed()) {
        const ProblemFile p = load_problem(zono_path);
        IndexSet s_prime;
        std::stringstream ss(zono_sprime);
        for (std::string item; std::getline(ss, item, ',');) {
            s_prime.push_back(std::stoul(item));
        }
        std::sort(s_prime.begin(), s_prime.end());
        ExternalRandomness ext(resolve_seed(zono_seed));
        const ZonotopeReport report =
            zonotope_identity_check(p.w, s_prime, zono_j, zono_points, ext);
        emit(zonotope_report_to_json(report), zono_json, zonotope_report_to_tsv(report));
        return report.pass ? kExitPass : kExitVerifyFail;
    }

    if (cmd_reduce->parsed()) {
        const ProblemFile p = load_problem(reduce_path);
        const IndexSet rows = independent_rows(p.w);
        // Dropped rows must be implied: (W|b) may not gain rank over the basis.
        RMatrix augmented(p.w.rows(), p.w.cols() + 1);
        for (std::size_t i = 0; i < p.w.rows(); ++i) {
            for (std::size_t j = 0; j < p.w.cols(); ++j) augmented(i, j) = p.w(i, j);
            augmented(i, p.w.cols()) = p.b[i];
        }
        if (rank(augmented) != rows.size()) {
            throw InputError("system W x = b is inconsistent; no row basis exists");
        }
        ProblemFile reduced;
        reduced.x = p.x;
        reduced.kind = p.kind;
        RMatrix w(rows.size(), p.w.cols());
        RVector b(rows.size());
        for (std::size_t t = 0; t < rows.size(); ++t) {
            for (std::size_t j = 0; j < p.w.cols(); ++j) w(t, j) = p.w(rows[t], j);
            b[t] = p.b[rows[t]];
        }
        reduced.w = std::move(w);
        reduced.b = std::move(b);
        validate_hidden_point(reduced);
        std::cout << problem_to_json(reduced).dump(2) << "\n";
        return kExitPass;
    }

    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
