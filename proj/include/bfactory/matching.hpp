#pragma once

#include "bfactory/generic_factory.hpp"

#include <utility>
#include <vector>

namespace bfactory {

// Image form, 0-based: pi[i] is the column matched to row i.
using Permutation = std::vector<std::size_t>;

// Undirected labeled tree as an edge list on {0, ..., n-1}.
using TreeEdges = std::vector<std::pair<std::size_t, std::size_t>>;

// Directed spanning tree with every vertex pointing along its unique path
// to the root: parent[v] is the head of v's single outgoing edge.
struct Arborescence {
    std::size_t root = 0;
    std::vector<std::size_t> parent;  // parent[root] == root
};

// Exactly uniform over the n^(n-2) labeled trees (uniform Pruefer sequence).
TreeEdges uniform_spanning_tree(std::size_t n, ExternalRandomness& ext);

Arborescence orient_toward(const TreeEdges& tree, std::size_t n, std::size_t root);

// All labeled trees on n vertices by Pruefer enumeration. n <= 8.
std::vector<TreeEdges> all_labeled_trees(std::size_t n);

std::vector<Arborescence> all_arborescences(std::size_t n, std::size_t root);

// Flattens a permutation matrix into the n^2 coin coordinates, row-major:
// entry (i, j) lives at index i*n + j.
VertexP permutation_vertex(const Permutation& pi);

std::vector<Permutation> all_permutations(std::size_t n);

// The weight polynomial of permutation pi over n^2 variables: the matching
// monomial prod_i x_{i,pi(i)} times one monomial per arborescence in
// T_root(n), each with coefficient 1 and total degree 2n-1.
BPolynomial arborescence_polynomial(const Permutation& pi, std::size_t root);

// Weight family for all n! permutations with a common root.
std::map<VertexP, BPolynomial> matching_weights(std::size_t n, std::size_t root = 0);

// Weighted directed Laplacian of the arc weights x: row i carries the
// out-weights, L(i,i) = sum_{k != i} x(i,k) and L(i,j) = -x(i,j). Rows sum
// to zero by construction; columns sum to zero iff x is zero-line-sum
// (e.g. doubly stochastic up to the diagonal correction).
RMatrix weighted_laplacian(const RMatrix& x);

// det of the Laplacian with row/column r removed; by the matrix-tree
// theorem this equals the arborescence sum below for every x.
Rational laplacian_minor_det(const RMatrix& x, std::size_t r);

// Brute-force sum over T_r(n) of prod_{(u,v) in T} x(u,v).
Rational brute_arborescence_sum(const RMatrix& x, std::size_t r);

// For a matrix with all row and column sums zero, checks that all n^2
// signed cofactors (-1)^(i+j) det A^(i,j) coincide. Throws on non-ZLS input.
bool zls_equal_cofactors(const RMatrix& a);

struct BiTreeCheck {
    std::uint64_t pairs = 0;             // (pi, T) pairs with pi(r) = c
    std::uint64_t distinct_bitrees = 0;  // distinct graphs G(pi, T)
    std::uint64_t roundtrip_failures = 0;
};

// Exhaustively checks the bijection between pairs (pi, T) with pi(r) = c
// and r-bi-trees: every constructed graph must satisfy the bi-tree
// conditions, be distinct, and invert back to the same pair. n <= 6.
BiTreeCheck bitree_bijection_check(std::size_t n, std::size_t r, std::size_t c);

// Rejection sampler for perfect matchings of K_{n,n} given coin access to a
// doubly stochastic matrix: uniform permutation, one coin per matched
// entry, then a uniform spanning tree oriented toward vertex 0 with one
// coin per tree edge. Conditional on termination, edge (i,j) appears with
// probability exactly x_{ij}. Flips per full round: n + (n-1).
RaceResult sample_matching(std::size_t n, CoinSource& coins, ExternalRandomness& ext,
                           std::optional<std::uint64_t> round_budget = std::nullopt);

// Full-rank row basis of the doubly stochastic constraints on n x n
// matrices: the n row sums plus the first n-1 column sums.
AffineSubspace birkhoff_subspace(std::size_t n);

}  // namespace bfactory
