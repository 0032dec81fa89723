#pragma once

#include "bfactory/verifier.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace bfactory {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem file: {"W": [["p/q", ...], ...], "b": [...], "x": [...]?, "kind": "..."?}
// W is kept raw (possibly rank-deficient) so that row reduction can be
// applied before an AffineSubspace is formed.
struct ProblemFile {
    RMatrix w;
    RVector b;
    std::optional<RVector> x;
    std::optional<std::string> kind;
};

ProblemFile problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemFile& p);
ProblemFile load_problem(const std::string& path);

// Validates the optional hidden point: W x = b exactly and x in [0,1]^n.
void validate_hidden_point(const ProblemFile& p);

RVector rvector_from_json(const nlohmann::json& j);
nlohmann::json rvector_to_json(const RVector& v);
RMatrix rmatrix_from_json(const nlohmann::json& j);
nlohmann::json rmatrix_to_json(const RMatrix& m);

// {"n": int, "monomials": [{"c": "p/q", "a": [...], "b": [...]}]}
nlohmann::json bpoly_to_json(const BPolynomial& p);
BPolynomial bpoly_from_json(const nlohmann::json& j);

nlohmann::json factory_to_json(const FactorySpec& spec);
FactorySpec factory_from_json(const nlohmann::json& j);
FactorySpec load_factory(const std::string& path);

nlohmann::json identity_report_to_json(const IdentityReport& report);
std::string identity_report_to_tsv(const IdentityReport& report);

nlohmann::json zonotope_report_to_json(const ZonotopeReport& report);
std::string zonotope_report_to_tsv(const ZonotopeReport& report);

nlohmann::json stat_report_to_json(const StatReport& report);
std::string stat_report_to_tsv(const StatReport& report);

}  // namespace bfactory
