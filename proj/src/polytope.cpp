#include "bfactory/polytope.hpp"

#include <algorithm>

namespace bfactory {

AffineSubspace::AffineSubspace(RMatrix w, RVector b) : w_(std::move(w)), b_(std::move(b)) {
    if (w_.rows() == 0 || w_.cols() == 0) throw DimensionError("empty constraint matrix");
    if (b_.size() != w_.rows()) throw DimensionError("b length must match row count of W");
    if (w_.rows() > w_.cols()) throw RankError("more constraint rows than variables");
    if (rank(w_) != w_.rows()) {
        throw RankError("W is rank-deficient; pass a full-rank row basis (see row-reduce)");
    }
}

namespace {

// Visits every k-subset of [n] in increasing lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    IndexSet s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = i;
    while (true) {
        if (!fn(s)) return;
        // advance
        std::size_t i = k;
        while (i-- > 0) {
            if (s[i] != i + n - k) break;
            if (i == 0) return;
        }
        if (s[i] == i + n - k) return;
        ++s[i];
        for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
}

IndexSet complement_of(const IndexSet& s, std::size_t n) {
    IndexSet rest;
    rest.reserve(n - s.size());
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (t < s.size() && s[t] == i) {
            ++t;
        } else {
            rest.push_back(i);
        }
    }
    return rest;
}

}  // namespace

void for_each_basic_solution(
    const AffineSubspace& h,
    const std::function<bool(const Partition&, const RVector&)>& fn) {
    const std::size_t n = h.n(), k = h.k();
    const RMatrix& w = h.w();
    bool keep_going = true;
    for_each_combination(n, k, [&](const IndexSet& basis) {
        const RMatrix w_s = submatrix_cols(w, basis);
        if (det(w_s) == 0) return true;
        const RMatrix w_s_inv = inverse(w_s);
        const IndexSet rest = complement_of(basis, n);
        if (rest.size() > 63) throw DimensionError("too many free coordinates to enumerate");

        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
            Partition p;
            p.basis = basis;
            for (std::size_t t = 0; t < rest.size(); ++t) {
                if (mask & (std::uint64_t{1} << t)) {
                    p.ones.push_back(rest[t]);
                } else {
                    p.zeros.push_back(rest[t]);
                }
            }
            RVector rhs = h.b();
            for (std::size_t idx : p.ones) {
                for (std::size_t r = 0; r < k; ++r) rhs[r] -= w(r, idx);
            }
            if (!fn(p, w_s_inv * rhs)) {
                keep_going = false;
                return false;
            }
        }
        return keep_going;
    });
}

std::vector<Partition> valid_partitions(const AffineSubspace& h) {
    std::vector<Partition> out;
    for_each_basic_solution(h, [&](const Partition& p, const RVector& x_s) {
        for (const Rational& v : x_s) {
            if (v <= 0 || v >= 1) return true;
        }
        out.push_back(p);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool is_generic(const AffineSubspace& h) {
    bool generic = true;
    for_each_basic_solution(h, [&](const Partition&, const RVector& x_s) {
        for (const Rational& v : x_s) {
            if (v == 0 || v == 1) {
                generic = false;
                return false;
            }
        }
        return true;
    });
    return generic;
}

VertexP vertex_of_partition(const AffineSubspace& h, const Partition& p) {
    const RMatrix w_s = submatrix_cols(h.w(), p.basis);
    if (det(w_s) == 0) throw SingularMatrixError("vertex_of_partition: singular W_S");
    RVector rhs = h.b();
    for (std::size_t idx : p.ones) {
        for (std::size_t r = 0; r < h.k(); ++r) rhs[r] -= h.w()(r, idx);
    }
    const RVector x_s = solve(w_s, rhs);
    for (const Rational& v : x_s) {
        if (v < 0 || v > 1) {
            throw std::domain_error("vertex_of_partition: basic solve leaves [0,1]");
        }
    }
    VertexP vertex(h.n(), Rational(0));
    for (std::size_t idx : p.ones) vertex[idx] = 1;
    for (std::size_t t = 0; t < p.basis.size(); ++t) vertex[p.basis[t]] = x_s[t];
    return vertex;
}

std::vector<VertexP> enumerate_vertices(const AffineSubspace& h) {
    std::vector<VertexP> out;
    for_each_basic_solution(h, [&](const Partition& p, const RVector& x_s) {
        for (const Rational& v : x_s) {
            if (v < 0 || v > 1) return true;
        }
        VertexP vertex(h.n(), Rational(0));
        for (std::size_t idx : p.ones) vertex[idx] = 1;
        for (std::size_t t = 0; t < p.basis.size(); ++t) vertex[p.basis[t]] = x_s[t];
        out.push_back(std::move(vertex));
        return true;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace bfactory
