#pragma once

#include "bfactory/rational.hpp"

#include <cstddef>
#include <vector>

namespace bfactory {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::domain_error {
    using std::domain_error::domain_error;
};

using RVector = std::vector<Rational>;
using IndexSet = std::vector<std::size_t>;  // strictly increasing indices

// Dense rational matrix, row-major. Treated as an immutable value: all
// operations below return fresh matrices.
class RMatrix {
public:
    RMatrix() : rows_(0), cols_(0) {}
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}
    RMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static RMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const Rational& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    RVector col(std::size_t j) const;
    RVector row(std::size_t i) const;

    bool operator==(const RMatrix& other) const = default;

private:
    std::size_t rows_, cols_;
    std::vector<Rational> entries_;
};

RMatrix operator*(const RMatrix& a, const RMatrix& b);
RVector operator*(const RMatrix& a, const RVector& x);

// Exact determinant: direct expansion for n <= 3, fraction-free (Bareiss)
// elimination above that.
Rational det(const RMatrix& m);

// Exact solution of m*x = rhs for square nonsingular m.
RVector solve(const RMatrix& m, const RVector& rhs);

// Columns of w selected by s, in increasing index order.
RMatrix submatrix_cols(const RMatrix& w, const IndexSet& s);

// Copy of w_s with column `position` replaced; the replacement keeps the
// replaced column's slot, so the column order is otherwise unchanged.
RMatrix replace_column(const RMatrix& w_s, std::size_t position, const RVector& column);

// sign(det W_{S[i -> j]} / det W_S) for i in s, j not in s.
// Requires det(W_S) != 0.
int sigma_sign(const RMatrix& w, const IndexSet& s, std::size_t i, std::size_t j);

std::size_t rank(const RMatrix& m);

// Greedy maximal set of linearly independent rows, in original order.
IndexSet independent_rows(const RMatrix& m);

// Exact inverse of a square nonsingular matrix.
RMatrix inverse(const RMatrix& m);

}  // namespace bfactory
