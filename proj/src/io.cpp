#include "bfactory/io.hpp"

#include <fstream>
#include <sstream>

namespace bfactory {

using nlohmann::json;

namespace {

Rational rational_field(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InputError("expected a rational as \"p/q\" string or integer");
}

json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

RVector rvector_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of rationals");
    RVector v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(rational_field(e));
    return v;
}

json rvector_to_json(const RVector& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rational_json(q));
    return out;
}

RMatrix rmatrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    if (cols == 0) throw InputError("matrix rows must be non-empty arrays");
    RMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw InputError("ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_field(j[i][c]);
    }
    return m;
}

json rmatrix_to_json(const RMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(rvector_to_json(m.row(i)));
    return out;
}

ProblemFile problem_from_json(const json& j) {
    if (!j.contains("W") || !j.contains("b")) throw InputError("problem needs \"W\" and \"b\"");
    ProblemFile p{rmatrix_from_json(j.at("W")), rvector_from_json(j.at("b")), std::nullopt,
                  std::nullopt};
    if (p.b.size() != p.w.rows()) throw InputError("b length must match the row count of W");
    if (j.contains("x")) p.x = rvector_from_json(j.at("x"));
    if (j.contains("kind")) p.kind = j.at("kind").get<std::string>();
    return p;
}

json problem_to_json(const ProblemFile& p) {
    json j;
    j["W"] = rmatrix_to_json(p.w);
    j["b"] = rvector_to_json(p.b);
    if (p.x) j["x"] = rvector_to_json(*p.x);
    if (p.kind) j["kind"] = *p.kind;
    return j;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return problem_from_json(j);
}

void validate_hidden_point(const ProblemFile& p) {
    if (!p.x) return;
    if (p.x->size() != p.w.cols()) throw InputError("x length must match the column count of W");
    for (const Rational& c : *p.x) {
        if (c < 0 || c > 1) throw InputError("x must lie in [0,1]^n");
    }
    const RVector wx = p.w * *p.x;
    for (std::size_t i = 0; i < wx.size(); ++i) {
        if (wx[i] != p.b[i]) throw InputError("x does not satisfy Wx = b exactly");
    }
}

json bpoly_to_json(const BPolynomial& p) {
    json monomials = json::array();
    for (const auto& m : p.monomials()) {
        json entry;
        entry["c"] = rational_json(m.coeff);
        entry["a"] = m.exp_one;
        entry["b"] = m.exp_zero;
        monomials.push_back(std::move(entry));
    }
    return json{{"n", p.vars()}, {"monomials", std::move(monomials)}};
}

BPolynomial bpoly_from_json(const json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<BMonomial> monomials;
    for (const auto& entry : j.at("monomials")) {
        BMonomial m;
        m.coeff = rational_field(entry.at("c"));
        m.exp_one = entry.at("a").get<std::vector<std::uint32_t>>();
        m.exp_zero = entry.at("b").get<std::vector<std::uint32_t>>();
        if (m.exp_one.size() != n || m.exp_zero.size() != n) {
            throw InputError("monomial exponent length mismatch");
        }
        monomials.push_back(std::move(m));
    }
    return BPolynomial(n, std::move(monomials));
}

json factory_to_json(const FactorySpec& spec) {
    json j;
    j["subspace"] = {{"W", rmatrix_to_json(spec.subspace.w())},
                     {"b", rvector_to_json(spec.subspace.b())}};
    if (spec.provenance == Provenance::Generic) {
        j["provenance"] = {{"kind", "generic"}};
    } else {
        j["provenance"] = {{"kind", "perturbed"},
                           {"b_t", rvector_to_json(*spec.perturbed_b)},
                           {"radius", rational_json(*spec.perturb_radius)}};
    }
    json weights = json::array();
    for (const auto& [v, p] : spec.weights) {
        weights.push_back(json{{"vertex", rvector_to_json(v)}, {"poly", bpoly_to_json(p)}});
    }
    j["weights"] = std::move(weights);
    return j;
}

FactorySpec factory_from_json(const json& j) {
    const json& sub = j.at("subspace");
    AffineSubspace subspace(rmatrix_from_json(sub.at("W")), rvector_from_json(sub.at("b")));
    FactorySpec spec{std::move(subspace), {}, Provenance::Generic, std::nullopt, std::nullopt};
    const json& prov = j.at("provenance");
    if (prov.at("kind") == "perturbed") {
        spec.provenance = Provenance::Perturbed;
        spec.perturbed_b = rvector_from_json(prov.at("b_t"));
        spec.perturb_radius = rational_field(prov.at("radius"));
    }
    for (const auto& entry : j.at("weights")) {
        VertexP v = rvector_from_json(entry.at("vertex"));
        BPolynomial p = bpoly_from_json(entry.at("poly"));
        if (v.size() != spec.subspace.n() || p.vars() != spec.subspace.n()) {
            throw InputError("weight entry dimension mismatch");
        }
        if (p.empty()) throw InputError("weight polynomial must be nonempty");
        spec.weights.emplace(std::move(v), std::move(p));
    }
    if (spec.weights.empty()) throw InputError("factory has no weights");
    return spec;
}

FactorySpec load_factory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return factory_from_json(j);
}

json identity_report_to_json(const IdentityReport& report) {
    json points = json::array();
    for (const auto& p : report.points) {
        bool zero = true;
        for (const auto& r : p.residual) {
            if (r != 0) zero = false;
        }
        points.push_back(json{{"x", rvector_to_json(p.x)},
                              {"residual", rvector_to_json(p.residual)},
                              {"residual_zero", zero},
                              {"weight_sum", rational_json(p.weight_sum)}});
    }
    return json{{"pass", report.pass},
                {"residuals_zero", report.residuals_zero},
                {"sums_positive", report.sums_positive},
                {"points", std::move(points)}};
}

std::string identity_report_to_tsv(const IdentityReport& report) {
    std::ostringstream out;
    out << "point\tresidual_zero\tweight_sum\n";
    for (std::size_t t = 0; t < report.points.size(); ++t) {
        const auto& p = report.points[t];
        bool zero = true;
        for (const auto& r : p.residual) {
            if (r != 0) zero = false;
        }
        out << t << '\t' << (zero ? "yes" : "NO") << '\t' << to_string(p.weight_sum) << '\n';
    }
    out << "# pass\t" << (report.pass ? "yes" : "NO") << '\n';
    return out.str();
}

json zonotope_report_to_json(const ZonotopeReport& report) {
    return json{{"pass", report.pass},
                {"points_tested", report.points_tested},
                {"boundary_skipped", report.boundary_skipped},
                {"balance_violations", report.balance_violations},
                {"total_volume", rational_json(report.total_volume)},
                {"positive_volume", rational_json(report.positive_volume)},
                {"negative_volume", rational_json(report.negative_volume)},
                {"volumes_match", report.volumes_match}};
}

std::string zonotope_report_to_tsv(const ZonotopeReport& report) {
    std::ostringstream out;
    out << "points_tested\t" << report.points_tested << '\n'
        << "boundary_skipped\t" << report.boundary_skipped << '\n'
        << "balance_violations\t" << report.balance_violations << '\n'
        << "total_volume\t" << to_string(report.total_volume) << '\n'
        << "positive_volume\t" << to_string(report.positive_volume) << '\n'
        << "negative_volume\t" << to_string(report.negative_volume) << '\n'
        << "volumes_match\t" << (report.volumes_match ? "yes" : "NO") << '\n'
        << "pass\t" << (report.pass ? "yes" : "NO") << '\n';
    return out.str();
}

json stat_report_to_json(const StatReport& report) {
    json tail_rows = json::array();
    for (const auto& row : report.tail.table) {
        tail_rows.push_back(json{{"threshold", row.threshold},
                                 {"exceedances", row.exceedances},
                                 {"prob", row.prob}});
    }
    json tail{{"rows", std::move(tail_rows)}, {"degenerate", report.tail.degenerate}};
    if (report.tail.c_hat) {
        tail["c_hat"] = *report.tail.c_hat;
    } else {
        tail["c_hat"] = nullptr;
    }
    return json{{"requested", report.requested},
                {"completed", report.completed},
                {"budget_exhausted", report.budget_exhausted},
                {"mean", rvector_to_json(report.empirical_mean)},
                {"z_scores", report.z_scores},
                {"chi_square", report.chi_square},
                {"p_value", report.p_value},
                {"dof", report.dof},
                {"total_rounds", report.total_rounds},
                {"total_flips", report.total_flips},
                {"tail", std::move(tail)}};
}

std::string stat_report_to_tsv(const StatReport& report) {
    std::ostringstream out;
    out << "coordinate\tmean\tz\n";
    for (std::size_t i = 0; i < report.empirical_mean.size(); ++i) {
        out << i << '\t' << to_string(report.empirical_mean[i]) << '\t'
            << (i < report.z_scores.size() ? report.z_scores[i] : 0.0) << '\n';
    }
    out << "# samples\t" << report.completed << "/" << report.requested << '\n'
        << "# budget_exhausted\t" << report.budget_exhausted << '\n'
        << "# chi_square\t" << report.chi_square << "\tdof\t" << report.dof << "\tp\t"
        << report.p_value << '\n'
        << "# total_rounds\t" << report.total_rounds << "\ttotal_flips\t" << report.total_flips
        << '\n';
    if (!report.tail.table.empty()) {
        out << "# tail\tthreshold\texceedances\tprob\n";
        for (const auto& row : report.tail.table) {
            out << "# tail\t" << row.threshold << '\t' << row.exceedances << '\t' << row.prob
                << '\n';
        }
        if (report.tail.c_hat) {
            out << "# tail_c_hat\t" << *report.tail.c_hat << '\n';
        } else {
            out << "# tail_c_hat\tdegenerate\n";
        }
    }
    return out.str();
}

}  // namespace bfactory
