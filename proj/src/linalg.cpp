#include "bfactory/linalg.hpp"

#include <algorithm>
#include <utility>

namespace bfactory {

RMatrix::RMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("entry count does not match matrix shape");
    }
}

RMatrix RMatrix::identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RVector RMatrix::col(std::size_t j) const {
    if (j >= cols_) throw DimensionError("column index out of range");
    RVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

RVector RMatrix::row(std::size_t i) const {
    if (i >= rows_) throw DimensionError("row index out of range");
    RVector out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
}

RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
    RMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t t = 0; t < a.cols(); ++t) {
            if (a(i, t) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += a(i, t) * b(t, j);
            }
        }
    }
    return out;
}

RVector operator*(const RMatrix& a, const RVector& x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
    RVector out(a.rows(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (x[j] == 0) continue;
            out[i] += a(i, j) * x[j];
        }
    }
    return out;
}

namespace {

// One Bareiss (fraction-free) elimination sweep. Returns the determinant.
// Every division in the recurrence is exact.
Rational bareiss_det(RMatrix m) {
    const std::size_t n = m.rows();
    Rational prev(1);
    int swaps = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t pivot = k;
            while (pivot < n && m(pivot, k) == 0) ++pivot;
            if (pivot == n) return Rational(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
            ++swaps;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    Rational d = m(n - 1, n - 1);
    return (swaps % 2 == 0) ? d : Rational(-d);
}

}  // namespace

Rational det(const RMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
    const std::size_t n = m.rows();
    switch (n) {
        case 0:
            return Rational(1);
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        default:
            return bareiss_det(m);
    }
}

RVector solve(const RMatrix& m, const RVector& rhs) {
    if (m.rows() != m.cols()) throw DimensionError("solve requires a square matrix");
    const std::size_t n = m.rows();
    if (rhs.size() != n) throw DimensionError("right-hand side length mismatch");

    // Augmented elimination, then back substitution.
    RMatrix a(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
        a(i, n) = rhs[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t pivot = k;
            while (pivot < n && a(pivot, k) == 0) ++pivot;
            if (pivot == n) throw SingularMatrixError("solve: singular matrix");
            for (std::size_t j = 0; j <= n; ++j) std::swap(a(k, j), a(pivot, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational factor = a(i, k) / a(k, k);
            a(i, k) = 0;
            for (std::size_t j = k + 1; j <= n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    RVector x(n, Rational(0));
    for (std::size_t i = n; i-- > 0;) {
        Rational acc = a(i, n);
        for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
        x[i] = acc / a(i, i);
    }
    return x;
}

RMatrix submatrix_cols(const RMatrix& w, const IndexSet& s) {
    RMatrix out(w.rows(), s.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s[t] >= w.cols()) throw DimensionError("column index out of range");
        for (std::size_t i = 0; i < w.rows(); ++i) out(i, t) = w(i, s[t]);
    }
    return out;
}

RMatrix replace_column(const RMatrix& w_s, std::size_t position, const RVector& column) {
    if (position >= w_s.cols()) throw DimensionError("replacement position out of range");
    if (column.size() != w_s.rows()) throw DimensionError("replacement column length mismatch");
    RMatrix out = w_s;
    for (std::size_t i = 0; i < w_s.rows(); ++i) out(i, position) = column[i];
    return out;
}

int sigma_sign(const RMatrix& w, const IndexSet& s, std::size_t i, std::size_t j) {
    const auto pos_it = std::find(s.begin(), s.end(), i);
    if (pos_it == s.end()) throw DimensionError("sigma_sign: i must lie in S");
    if (std::find(s.begin(), s.end(), j) != s.end()) {
        throw DimensionError("sigma_sign: j must lie outside S");
    }
    const RMatrix w_s = submatrix_cols(w, s);
    const Rational d = det(w_s);
    if (d == 0) throw SingularMatrixError("sigma_sign: det W_S = 0");
    const std::size_t position = static_cast<std::size_t>(pos_it - s.begin());
    const Rational d_swapped = det(replace_column(w_s, position, w.col(j)));
    return sign(d_swapped) * sign(d);
}

std::size_t rank(const RMatrix& m) {
    RMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a(pivot, c) == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(pivot, j));
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a(i, c) == 0) continue;
            Rational factor = a(i, c) / a(r, c);
            for (std::size_t j = c; j < cols; ++j) a(i, j) -= factor * a(r, j);
        }
        ++r;
    }
    return r;
}

IndexSet independent_rows(const RMatrix& m) {
    IndexSet chosen;
    std::vector<RVector> basis;  // reduced row echelon rows
    std::vector<std::size_t> lead;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RVector r = m.row(i);
        for (std::size_t t = 0; t < basis.size(); ++t) {
            if (r[lead[t]] == 0) continue;
            Rational factor = r[lead[t]] / basis[t][lead[t]];
            for (std::size_t j = 0; j < r.size(); ++j) r[j] -= factor * basis[t][j];
        }
        std::size_t first = 0;
        while (first < r.size() && r[first] == 0) ++first;
        if (first == r.size()) continue;  // dependent row
        chosen.push_back(i);
        basis.push_back(std::move(r));
        lead.push_back(first);
    }
    return chosen;
}

RMatrix inverse(const RMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RMatrix out(n, n);
    const RMatrix id = RMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        RVector x = solve(m, id.col(j));
        for (std::size_t i = 0; i < n; ++i) out(i, j) = x[i];
    }
    return out;
}

}  // namespace bfactory
