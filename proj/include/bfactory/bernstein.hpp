#pragma once

#include "bfactory/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bfactory {

// c * prod_i x_i^{exp_one[i]} * (1-x_i)^{exp_zero[i]}, with c > 0.
struct BMonomial {
    Rational coeff;
    std::vector<std::uint32_t> exp_one;   // power of x_i
    std::vector<std::uint32_t> exp_zero;  // power of (1 - x_i)

    std::size_t vars() const { return exp_one.size(); }
    std::uint32_t degree(std::size_t i) const { return exp_one[i] + exp_zero[i]; }
};

BMonomial constant_monomial(std::size_t n, Rational coeff);

// Positive combination of Bernstein monomials over a fixed variable count.
// Held in canonical form: monomials sorted lexicographically by
// (exp_one, exp_zero), equal exponent pairs merged (coefficients add; no
// cancellation is possible since all coefficients are positive).
class BPolynomial {
public:
    explicit BPolynomial(std::size_t n) : n_(n) {}
    BPolynomial(std::size_t n, std::vector<BMonomial> monomials);

    std::size_t vars() const { return n_; }
    bool empty() const { return monomials_.empty(); }
    std::size_t size() const { return monomials_.size(); }
    const std::vector<BMonomial>& monomials() const { return monomials_; }

    // Form equality on canonical representations. Two distinct forms may
    // still agree as functions on a subspace; this comparison is stricter.
    bool operator==(const BPolynomial& other) const;

private:
    std::size_t n_;
    std::vector<BMonomial> monomials_;
};

// Exact evaluation at x in [0,1]^n. Nonnegative everywhere on the cube and
// strictly positive on (0,1)^n for nonempty polynomials.
Rational evaluate(const BPolynomial& p, const RVector& x);

Rational coeff_sum(const BPolynomial& p);

// Per-variable degree max_j deg_i(M_j).
std::vector<std::uint32_t> max_degree(const BPolynomial& p);

// Exact quotient q with q * m == p, or nullopt when some monomial of p is
// not divisible by m. Requires m.coeff == 1.
std::optional<BPolynomial> divide_by_monomial(const BPolynomial& p, const BMonomial& m);

BPolynomial multiply_by_monomial(const BPolynomial& p, const BMonomial& m);

bool poly_equal(const BPolynomial& p, const BPolynomial& q);

// Disjoint-union sum: concatenates monomial lists and re-canonicalizes.
BPolynomial poly_sum(const BPolynomial& p, const BPolynomial& q);

}  // namespace bfactory
