#include "bfactory/bernstein.hpp"

#include <algorithm>

namespace bfactory {

namespace {

bool exp_less(const BMonomial& a, const BMonomial& b) {
    if (a.exp_one != b.exp_one) return a.exp_one < b.exp_one;
    return a.exp_zero < b.exp_zero;
}

bool exp_equal(const BMonomial& a, const BMonomial& b) {
    return a.exp_one == b.exp_one && a.exp_zero == b.exp_zero;
}

Rational pow_rational(const Rational& base, std::uint32_t e) {
    Rational acc(1);
    for (std::uint32_t t = 0; t < e; ++t) acc *= base;
    return acc;
}

}  // namespace

BMonomial constant_monomial(std::size_t n, Rational coeff) {
    return BMonomial{std::move(coeff), std::vector<std::uint32_t>(n, 0),
                     std::vector<std::uint32_t>(n, 0)};
}

BPolynomial::BPolynomial(std::size_t n, std::vector<BMonomial> monomials) : n_(n) {
    for (const auto& m : monomials) {
        if (m.exp_one.size() != n_ || m.exp_zero.size() != n_) {
            throw DimensionError("monomial variable count mismatch");
        }
        if (m.coeff <= 0) throw std::invalid_argument("monomial coefficient must be positive");
    }
    std::sort(monomials.begin(), monomials.end(), exp_less);
    for (auto& m : monomials) {
        if (!monomials_.empty() && exp_equal(monomials_.back(), m)) {
            monomials_.back().coeff += m.coeff;
        } else {
            monomials_.push_back(std::move(m));
        }
    }
}

bool BPolynomial::operator==(const BPolynomial& other) const {
    if (n_ != other.n_ || monomials_.size() != other.monomials_.size()) return false;
    for (std::size_t t = 0; t < monomials_.size(); ++t) {
        if (!exp_equal(monomials_[t], other.monomials_[t])) return false;
        if (monomials_[t].coeff != other.monomials_[t].coeff) return false;
    }
    return true;
}

Rational evaluate(const BPolynomial& p, const RVector& x) {
    if (x.size() != p.vars()) throw DimensionError("evaluation point length mismatch");
    Rational total(0);
    for (const auto& m : p.monomials()) {
        Rational term = m.coeff;
        for (std::size_t i = 0; i < x.size() && term != 0; ++i) {
            if (m.exp_one[i] > 0) term *= pow_rational(x[i], m.exp_one[i]);
            if (m.exp_zero[i] > 0) term *= pow_rational(Rational(1) - x[i], m.exp_zero[i]);
        }
        total += term;
    }
    return total;
}

Rational coeff_sum(const BPolynomial& p) {
    Rational total(0);
    for (const auto& m : p.monomials()) total += m.coeff;
    return total;
}

std::vector<std::uint32_t> max_degree(const BPolynomial& p) {
    std::vector<std::uint32_t> deg(p.vars(), 0);
    for (const auto& m : p.monomials()) {
        for (std::size_t i = 0; i < p.vars(); ++i) deg[i] = std::max(deg[i], m.degree(i));
    }
    return deg;
}

std::optional<BPolynomial> divide_by_monomial(const BPolynomial& p, const BMonomial& m) {
    if (m.vars() != p.vars()) throw DimensionError("divisor variable count mismatch");
    if (m.coeff != 1) throw std::invalid_argument("divisor must have coefficient 1");
    std::vector<BMonomial> quotient;
    quotient.reserve(p.size());
    for (const auto& term : p.monomials()) {
        BMonomial q = term;
        for (std::size_t i = 0; i < p.vars(); ++i) {
            if (term.exp_one[i] < m.exp_one[i] || term.exp_zero[i] < m.exp_zero[i]) {
                return std::nullopt;
            }
            q.exp_one[i] = term.exp_one[i] - m.exp_one[i];
            q.exp_zero[i] = term.exp_zero[i] - m.exp_zero[i];
        }
        quotient.push_back(std::move(q));
    }
    return BPolynomial(p.vars(), std::move(quotient));
}

BPolynomial multiply_by_monomial(const BPolynomial& p, const BMonomial& m) {
    if (m.vars() != p.vars()) throw DimensionError("multiplier variable count mismatch");
    std::vector<BMonomial> product;
    product.reserve(p.size());
    for (const auto& term : p.monomials()) {
        BMonomial q = term;
        q.coeff *= m.coeff;
        for (std::size_t i = 0; i < p.vars(); ++i) {
            q.exp_one[i] += m.exp_one[i];
            q.exp_zero[i] += m.exp_zero[i];
        }
        product.push_back(std::move(q));
    }
    return BPolynomial(p.vars(), std::move(product));
}

bool poly_equal(const BPolynomial& p, const BPolynomial& q) { return p == q; }

BPolynomial poly_sum(const BPolynomial& p, const BPolynomial& q) {
    if (p.vars() != q.vars()) throw DimensionError("sum variable count mismatch");
    std::vector<BMonomial> all = p.monomials();
    all.insert(all.end(), q.monomials().begin(), q.monomials().end());
    return BPolynomial(p.vars(), std::move(all));
}

}  // namespace bfactory
