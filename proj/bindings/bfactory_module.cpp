// Python bindings for the core operations. Rationals cross the boundary as
// "p/q" strings and structured data as JSON strings, which the python
// package decodes; sampling returns plain tuples.

#include "bfactory/io.hpp"
#include "bfactory/ksubset.hpp"
#include "bfactory/matching.hpp"
#include "bfactory/verifier.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace bfactory;

namespace {

RMatrix matrix_from_strings(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty() || rows.front().empty()) throw InputError("empty matrix");
    RMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw InputError("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = parse_rational(rows[i][j]);
    }
    return m;
}

RVector vector_from_strings(const std::vector<std::string>& entries) {
    RVector v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(parse_rational(e));
    return v;
}

std::vector<std::string> vector_to_strings(const RVector& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

using Rows = std::vector<std::vector<std::string>>;
using Strings = std::vector<std::string>;

std::vector<std::tuple<Strings, std::uint64_t, std::uint64_t>> collect_samples(
    const std::function<RaceResult()>& draw, std::size_t n_samples) {
    std::vector<std::tuple<Strings, std::uint64_t, std::uint64_t>> out;
    out.reserve(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        const RaceResult r = draw();
        if (r.exhausted()) {
            out.emplace_back(Strings{}, r.rounds, r.flips);
        } else {
            out.emplace_back(vector_to_strings(r.outcome->vertex), r.outcome->rounds,
                             r.outcome->flips);
        }
    }
    return out;
}

std::optional<std::uint64_t> budget_of(py::object budget) {
    if (budget.is_none()) return std::nullopt;
    return budget.cast<std::uint64_t>();
}

}  // namespace

PYBIND11_MODULE(_bfactory, m) {
    m.doc() = "Exact Bernoulli-factory sampling of polytope vertices (C++ core)";

    m.def(
        "vertices",
        [](const Rows& w, const Strings& b) {
            const AffineSubspace h(matrix_from_strings(w), vector_from_strings(b));
            std::vector<Strings> out;
            for (const auto& v : enumerate_vertices(h)) out.push_back(vector_to_strings(v));
            return out;
        },
        py::arg("w"), py::arg("b"), "Exact vertex enumeration of [0,1]^n intersect {Wx=b}.");

    m.def(
        "is_generic",
        [](const Rows& w, const Strings& b) {
            return is_generic(AffineSubspace(matrix_from_strings(w), vector_from_strings(b)));
        },
        py::arg("w"), py::arg("b"));

    m.def(
        "build_factory",
        [](const Rows& w, const Strings& b, std::uint64_t seed, const std::string& radius) {
            const AffineSubspace h(matrix_from_strings(w), vector_from_strings(b));
            ExternalRandomness ext(seed);
            const FactorySpec spec = build_factory(h, parse_rational(radius), ext);
            return factory_to_json(spec).dump();
        },
        py::arg("w"), py::arg("b"), py::arg("seed"), py::arg("radius") = "1/1024",
        "Builds a vertex-weight factory (generic recipe, or certified perturbed "
        "limit for non-generic inputs); returns its JSON form.");

    m.def(
        "sample",
        [](const std::string& factory_json, const Strings& x, std::size_t n_samples,
           std::uint64_t seed, py::object budget) {
            const FactorySpec spec = factory_from_json(nlohmann::json::parse(factory_json));
            SimulatedCoins coins(vector_from_strings(x), seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            return collect_samples(
                [&] { return bernoulli_race(spec.weights, coins, ext, budget_of(budget)); },
                n_samples);
        },
        py::arg("factory_json"), py::arg("x"), py::arg("n_samples"), py::arg("seed"),
        py::arg("round_budget") = py::none(),
        "Runs the race against simulated coins for the hidden point x; returns "
        "(vertex, rounds, flips) tuples, with an empty vertex on budget exhaustion.");

    m.def(
        "verify",
        [](const std::string& factory_json, std::size_t points, std::uint64_t seed) {
            const FactorySpec spec = factory_from_json(nlohmann::json::parse(factory_json));
            ExternalRandomness ext(seed);
            return identity_report_to_json(verify_identity(spec, points, ext)).dump();
        },
        py::arg("factory_json"), py::arg("points") = 100, py::arg("seed") = 0,
        "Exact residual certificate; returns the report as JSON.");

    m.def(
        "stats",
        [](const std::string& factory_json, const Strings& x, std::size_t n_samples,
           std::uint64_t seed, py::object budget) {
            const FactorySpec spec = factory_from_json(nlohmann::json::parse(factory_json));
            return stat_report_to_json(
                       stat_check(spec, vector_from_strings(x), n_samples, seed,
                                  budget_of(budget)))
                .dump();
        },
        py::arg("factory_json"), py::arg("x"), py::arg("n_samples"), py::arg("seed"),
        py::arg("round_budget") = py::none());

    m.def(
        "sample_matching",
        [](std::size_t n, const Rows& x, std::size_t n_samples, std::uint64_t seed,
           py::object budget) {
            const RMatrix mat = matrix_from_strings(x);
            if (mat.rows() != n || mat.cols() != n) throw InputError("matrix shape mismatch");
            RVector flat(n * n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = mat(i, j);
            }
            SimulatedCoins coins(flat, seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            return collect_samples(
                [&] { return sample_matching(n, coins, ext, budget_of(budget)); }, n_samples);
        },
        py::arg("n"), py::arg("x"), py::arg("n_samples"), py::arg("seed"),
        py::arg("round_budget") = py::none(),
        "Perfect-matching sampler for a doubly stochastic matrix; vertices are "
        "returned as flattened permutation matrices (row-major).");

    m.def(
        "sample_ksubset",
        [](std::size_t n, const std::string& alpha, const std::string& variant, const Strings& x,
           std::size_t n_samples, std::uint64_t seed, py::object budget) {
            const KSubsetSpec spec = make_ksubset(n, parse_rational(alpha));
            SimulatedCoins coins(vector_from_strings(x), seed);
            ExternalRandomness ext(seed ^ 0x9e3779b97f4a7c15ULL);
            std::function<RaceResult()> draw;
            if (variant == "minus") {
                draw = [&] { return sampford_minus(spec, coins, ext, budget_of(budget)); };
            } else if (variant == "plus") {
                draw = [&] { return sampford_plus(spec, coins, ext, budget_of(budget)); };
            } else if (variant == "v1" || variant == "v2") {
                const NonIntegerVariant v =
                    variant == "v1" ? NonIntegerVariant::V1 : NonIntegerVariant::V2;
                draw = [&, v] { return sample_noninteger(spec, coins, ext, v, budget_of(budget)); };
            } else {
                throw InputError("variant must be minus, plus, v1 or v2");
            }
            return collect_samples(draw, n_samples);
        },
        py::arg("n"), py::arg("alpha"), py::arg("variant"), py::arg("x"), py::arg("n_samples"),
        py::arg("seed"), py::arg("round_budget") = py::none());

    m.def(
        "boundary_probe",
        [](std::size_t n, std::size_t k, const Strings& point) {
            const KSubsetSpec spec = make_ksubset(n, Rational(static_cast<long long>(k)));
            return to_string(boundary_probe(spec, vector_from_strings(point)));
        },
        py::arg("n"), py::arg("k"), py::arg("point"),
        "Exact per-round acceptance mass of the k-subset family at a point.");

    m.def(
        "row_reduce",
        [](const Rows& w, const Strings& b) {
            const RMatrix mat = matrix_from_strings(w);
            const RVector rhs = vector_from_strings(b);
            if (rhs.size() != mat.rows()) throw InputError("b length mismatch");
            const IndexSet rows = independent_rows(mat);
            RMatrix augmented(mat.rows(), mat.cols() + 1);
            for (std::size_t i = 0; i < mat.rows(); ++i) {
                for (std::size_t j = 0; j < mat.cols(); ++j) augmented(i, j) = mat(i, j);
                augmented(i, mat.cols()) = rhs[i];
            }
            if (rank(augmented) != rows.size()) throw InputError("inconsistent system");
            Rows w_out;
            Strings b_out;
            for (std::size_t r : rows) {
                w_out.push_back(vector_to_strings(mat.row(r)));
                b_out.push_back(to_string(rhs[r]));
            }
            return py::make_tuple(w_out, b_out);
        },
        py::arg("w"), py::arg("b"), "Full-rank row basis of a consistent system (W|b).");

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "RationalParseError", PyExc_ValueError);
}
