#pragma once

#include "bfactory/linalg.hpp"

#include <compare>
#include <functional>
#include <vector>

namespace bfactory {

struct RankError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonGenericError : std::domain_error {
    using std::domain_error::domain_error;
};

// The affine slice {x : Wx = b} with W a full-row-rank k x n matrix. The
// polytope of interest is P = [0,1]^n intersected with this set.
class AffineSubspace {
public:
    AffineSubspace(RMatrix w, RVector b);

    const RMatrix& w() const { return w_; }
    const RVector& b() const { return b_; }
    std::size_t n() const { return w_.cols(); }
    std::size_t k() const { return w_.rows(); }

    bool operator==(const AffineSubspace&) const = default;

private:
    RMatrix w_;
    RVector b_;
};

// (zeros, basis, ones): coordinates pinned to 0, the k basic (fractional)
// coordinates, and coordinates pinned to 1. Disjoint cover of [n].
struct Partition {
    IndexSet zeros;
    IndexSet basis;
    IndexSet ones;

    friend auto operator<=>(const Partition& a, const Partition& b) {
        if (auto c = a.basis <=> b.basis; c != 0) return c;
        return a.ones <=> b.ones;
    }
    friend bool operator==(const Partition& a, const Partition& b) {
        return a.basis == b.basis && a.ones == b.ones;
    }
};

// A vertex is its exact coordinate vector.
using VertexP = RVector;

// All (zeros, basis, ones) with det W_basis != 0 whose basic solve lands
// strictly inside (0,1)^k. Sorted by (basis, ones).
std::vector<Partition> valid_partitions(const AffineSubspace& h);

// True iff no basic solve over any (basis, ones) choice has a coordinate
// exactly 0 or 1 (solves landing outside [0,1] elsewhere are fine).
bool is_generic(const AffineSubspace& h);

// Assembles the vertex named by p: zeros pinned to 0, ones pinned to 1,
// basic coordinates solved exactly. Requires the solve to land in the
// closed cube [0,1]^k.
VertexP vertex_of_partition(const AffineSubspace& h, const Partition& p);

// Generic subspace: image of valid_partitions (a bijection). Non-generic:
// all basic solves landing in the closed cube, deduplicated. Sorted
// lexicographically by coordinates.
std::vector<VertexP> enumerate_vertices(const AffineSubspace& h);

// Enumeration helper shared by the operations above and by the factory
// builders: calls fn(partition, basic solve) for every (basis, ones) choice
// with det W_basis != 0. Stops early when fn returns false.
void for_each_basic_solution(
    const AffineSubspace& h,
    const std::function<bool(const Partition&, const RVector&)>& fn);

}  // namespace bfactory
