#include "bfactory/matching.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace bfactory {

namespace {

TreeEdges decode_pruefer(const std::vector<std::size_t>& seq, std::size_t n) {
    TreeEdges edges;
    if (n <= 1) return edges;
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t v : seq) ++degree[v];
    std::vector<bool> used(n, false);
    for (std::size_t s : seq) {
        std::size_t leaf = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!used[v] && degree[v] == 1) {
                leaf = v;
                break;
            }
        }
        edges.emplace_back(leaf, s);
        used[leaf] = true;
        --degree[leaf];
        --degree[s];
    }
    std::size_t a = n, b = n;
    for (std::size_t v = 0; v < n; ++v) {
        if (!used[v] && degree[v] == 1) {
            (a == n ? a : b) = v;
        }
    }
    edges.emplace_back(a, b);
    return edges;
}

constexpr std::size_t kMaxEnumerationVertices = 8;

}  // namespace

TreeEdges uniform_spanning_tree(std::size_t n, ExternalRandomness& ext) {
    if (n <= 2) return decode_pruefer({}, n);
    std::vector<std::size_t> seq(n - 2);
    for (auto& s : seq) s = ext.uniform_index(n);
    return decode_pruefer(seq, n);
}

Arborescence orient_toward(const TreeEdges& tree, std::size_t n, std::size_t root) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [u, v] : tree) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    Arborescence arb{root, std::vector<std::size_t>(n, n)};
    arb.parent[root] = root;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t u : adj[v]) {
            if (arb.parent[u] != n) continue;
            arb.parent[u] = v;
            queue.push_back(u);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (arb.parent[v] == n) throw std::invalid_argument("edge list is not a spanning tree");
    }
    return arb;
}

std::vector<TreeEdges> all_labeled_trees(std::size_t n) {
    if (n > kMaxEnumerationVertices) {
        throw std::invalid_argument("tree enumeration limited to n <= 8");
    }
    std::vector<TreeEdges> trees;
    if (n <= 2) {
        trees.push_back(decode_pruefer({}, n));
        return trees;
    }
    std::vector<std::size_t> seq(n - 2, 0);
    while (true) {
        trees.push_back(decode_pruefer(seq, n));
        std::size_t pos = seq.size();
        while (pos > 0 && seq[pos - 1] == n - 1) seq[--pos] = 0;
        if (pos == 0) break;
        ++seq[pos - 1];
    }
    return trees;
}

std::vector<Arborescence> all_arborescences(std::size_t n, std::size_t root) {
    std::vector<Arborescence> arbs;
    for (const TreeEdges& t : all_labeled_trees(n)) {
        arbs.push_back(orient_toward(t, n, root));
    }
    return arbs;
}

VertexP permutation_vertex(const Permutation& pi) {
    const std::size_t n = pi.size();
    VertexP v(n * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + pi[i]] = 1;
    return v;
}

std::vector<Permutation> all_permutations(std::size_t n) {
    Permutation pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(pi);
    } while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

BPolynomial arborescence_polynomial(const Permutation& pi, std::size_t root) {
    const std::size_t n = pi.size();
    if (n > kMaxEnumerationVertices) {
        throw std::invalid_argument("arborescence polynomial limited to n <= 8");
    }
    std::vector<BMonomial> monomials;
    for (const Arborescence& arb : all_arborescences(n, root)) {
        BMonomial m{Rational(1), std::vector<std::uint32_t>(n * n, 0),
                    std::vector<std::uint32_t>(n * n, 0)};
        for (std::size_t i = 0; i < n; ++i) m.exp_one[i * n + pi[i]] += 1;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == root) continue;
            m.exp_one[u * n + pi[arb.parent[u]]] += 1;
        }
        monomials.push_back(std::move(m));
    }
    return BPolynomial(n * n, std::move(monomials));
}

std::map<VertexP, BPolynomial> matching_weights(std::size_t n, std::size_t root) {
    std::map<VertexP, BPolynomial> weights;
    for (const Permutation& pi : all_permutations(n)) {
        weights.emplace(permutation_vertex(pi), arborescence_polynomial(pi, root));
    }
    return weights;
}

RMatrix weighted_laplacian(const RMatrix& x) {
    if (x.rows() != x.cols()) throw DimensionError("weight matrix must be square");
    const std::size_t n = x.rows();
    RMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational out_weight(0);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            out_weight += x(i, k);
            l(i, k) = -x(i, k);
        }
        l(i, i) = out_weight;
    }
    return l;
}

namespace {

RMatrix drop_row_col(const RMatrix& m, std::size_t r, std::size_t c) {
    RMatrix out(m.rows() - 1, m.cols() - 1);
    for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
            if (j == c) continue;
            out(oi, oj) = m(i, j);
            ++oj;
        }
        ++oi;
    }
    return out;
}

}  // namespace

Rational laplacian_minor_det(const RMatrix& x, std::size_t r) {
    const RMatrix l = weighted_laplacian(x);
    if (l.rows() == 1) return Rational(1);  // empty product over the empty minor
    return det(drop_row_col(l, r, r));
}

Rational brute_arborescence_sum(const RMatrix& x, std::size_t r) {
    const std::size_t n = x.rows();
    Rational total(0);
    for (const Arborescence& arb : all_arborescences(n, r)) {
        Rational term(1);
        for (std::size_t u = 0; u < n; ++u) {
            if (u == r) continue;
            term *= x(u, arb.parent[u]);
        }
        total += term;
    }
    return total;
}

bool zls_equal_cofactors(const RMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("ZLS check requires a square matrix");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        Rational row_sum(0), col_sum(0);
        for (std::size_t j = 0; j < n; ++j) {
            row_sum += a(i, j);
            col_sum += a(j, i);
        }
        if (row_sum != 0 || col_sum != 0) {
            throw std::invalid_argument("matrix is not zero-line-sum");
        }
    }
    if (n == 1) return true;
    const Rational reference = det(drop_row_col(a, 0, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational cof = det(drop_row_col(a, i, j));
            if ((i + j) % 2 == 1) cof = -cof;
            if (cof != reference) return false;
        }
    }
    return true;
}

namespace {

// Edges of the bipartite graph G(pi, T): (u_L, pi(u)_R) for u != r, plus
// (u_L, pi(v)_R) for each tree edge u -> v. Kept sorted for set identity.
using BiGraph = std::vector<std::pair<std::size_t, std::size_t>>;

BiGraph build_bigraph(const Permutation& pi, const Arborescence& arb, std::size_t r) {
    BiGraph edges;
    const std::size_t n = pi.size();
    for (std::size_t u = 0; u < n; ++u) {
        if (u == r) continue;
        edges.emplace_back(u, pi[u]);
        edges.emplace_back(u, pi[arb.parent[u]]);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

bool is_rbitree(const BiGraph& edges, std::size_t n, std::size_t r) {
    std::vector<std::size_t> left_degree(n, 0);
    // Union-find over 2n vertices: left u -> u, right v -> n + v.
    std::vector<std::size_t> uf(2 * n);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](std::size_t v) {
        while (uf[v] != v) v = uf[v] = uf[uf[v]];
        return v;
    };
    for (const auto& [u, v] : edges) {
        ++left_degree[u];
        uf[find(u)] = find(n + v);
    }
    if (left_degree[r] != 0) return false;
    for (std::size_t u = 0; u < n; ++u) {
        if (u != r && left_degree[u] != 2) return false;
    }
    // All vertices except r_L in one component.
    const std::size_t component = find(n);  // 0_R always exists
    for (std::size_t u = 0; u < n; ++u) {
        if (u != r && find(u) != component) return false;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (find(n + v) != component) return false;
    }
    return true;
}

// Inverts G back to (pi, T): BFS distances from c_R split each left
// vertex's two edges into its matching edge (toward the farther right
// vertex) and its tree edge (toward the nearer one).
bool invert_bigraph(const BiGraph& edges, std::size_t n, std::size_t r, std::size_t c,
                    Permutation& pi_out, Arborescence& arb_out) {
    std::vector<std::vector<std::size_t>> left_adj(n), right_adj(n);
    for (const auto& [u, v] : edges) {
        left_adj[u].push_back(v);
        right_adj[v].push_back(u);
    }
    constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist_left(n, kUnreached), dist_right(n, kUnreached);
    std::deque<std::size_t> queue;
    dist_right[c] = 0;
    queue.push_back(n + c);
    while (!queue.empty()) {
        const std::size_t node = queue.front();
        queue.pop_front();
        if (node >= n) {
            const std::size_t v = node - n;
            for (std::size_t u : right_adj[v]) {
                if (dist_left[u] != kUnreached) continue;
                dist_left[u] = dist_right[v] + 1;
                queue.push_back(u);
            }
        } else {
            for (std::size_t v : left_adj[node]) {
                if (dist_right[v] != kUnreached) continue;
                dist_right[v] = dist_left[node] + 1;
                queue.push_back(n + v);
            }
        }
    }

    pi_out.assign(n, n);
    pi_out[r] = c;
    std::vector<std::size_t> tree_partner(n, n);  // right endpoint of each u's tree edge
    for (std::size_t u = 0; u < n; ++u) {
        if (u == r) continue;
        if (dist_left[u] == kUnreached || left_adj[u].size() != 2) return false;
        std::size_t matched = n, toward_root = n;
        for (std::size_t v : left_adj[u]) {
            if (dist_right[v] == dist_left[u] + 1) {
                matched = v;
            } else if (dist_right[v] + 1 == dist_left[u]) {
                toward_root = v;
            }
        }
        if (matched == n || toward_root == n) return false;
        pi_out[u] = matched;
        tree_partner[u] = toward_root;
    }
    std::vector<std::size_t> inverse(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        if (pi_out[u] >= n || inverse[pi_out[u]] != n) return false;
        inverse[pi_out[u]] = u;
    }
    arb_out.root = r;
    arb_out.parent.assign(n, n);
    arb_out.parent[r] = r;
    for (std::size_t u = 0; u < n; ++u) {
        if (u == r) continue;
        arb_out.parent[u] = inverse[tree_partner[u]];
    }
    // Must be an arborescence: every vertex reaches r.
    for (std::size_t u = 0; u < n; ++u) {
        std::size_t v = u, steps = 0;
        while (v != r) {
            v = arb_out.parent[v];
            if (v >= n || ++steps > n) return false;
        }
    }
    return true;
}

}  // namespace

BiTreeCheck bitree_bijection_check(std::size_t n, std::size_t r, std::size_t c) {
    if (n > 6) throw std::invalid_argument("bi-tree enumeration limited to n <= 6");
    if (r >= n || c >= n) throw std::invalid_argument("root or column out of range");
    BiTreeCheck check;
    std::set<BiGraph> seen;
    const auto arbs = all_arborescences(n, r);
    for (const Permutation& pi : all_permutations(n)) {
        if (pi[r] != c) continue;
        for (const Arborescence& arb : arbs) {
            ++check.pairs;
            const BiGraph g = build_bigraph(pi, arb, r);
            bool ok = is_rbitree(g, n, r);
            Permutation pi_back;
            Arborescence arb_back;
            if (ok) ok = invert_bigraph(g, n, r, c, pi_back, arb_back);
            if (ok) ok = (pi_back == pi) && (arb_back.parent == arb.parent);
            if (ok) {
                seen.insert(g);
            } else {
                ++check.roundtrip_failures;
            }
        }
    }
    check.distinct_bitrees = seen.size();
    return check;
}

RaceResult sample_matching(std::size_t n, CoinSource& coins, ExternalRandomness& ext,
                           std::optional<std::uint64_t> round_budget) {
    if (n == 0) throw std::invalid_argument("matching sampler requires n >= 1");
    RaceResult result;
    const std::uint64_t flips_before = coins.flips_total();
    Permutation pi(n);
    while (true) {
        if (round_budget && result.rounds >= *round_budget) {
            result.flips = coins.flips_total() - flips_before;
            return result;
        }
        ++result.rounds;
        // Uniform permutation (Fisher-Yates on exact uniform indices).
        std::iota(pi.begin(), pi.end(), 0);
        for (std::size_t i = n; i-- > 1;) {
            std::swap(pi[i], pi[ext.uniform_index(i + 1)]);
        }
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!coins.flip(i * n + pi[i])) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        const Arborescence arb = orient_toward(uniform_spanning_tree(n, ext), n, 0);
        for (std::size_t u = 1; u < n && ok; ++u) {
            ok = coins.flip(u * n + pi[arb.parent[u]]);
        }
        if (!ok) continue;
        result.flips = coins.flips_total() - flips_before;
        result.outcome = SampleOutcome{permutation_vertex(pi), result.rounds, result.flips};
        return result;
    }
}

AffineSubspace birkhoff_subspace(std::size_t n) {
    if (n == 0) throw std::invalid_argument("birkhoff_subspace requires n >= 1");
    const std::size_t rows = (n == 1) ? 1 : 2 * n - 1;
    RMatrix w(rows, n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, i * n + j) = 1;
    }
    for (std::size_t c = 0; c + 1 < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) w(n + c, i * n + c) = 1;
    }
    return AffineSubspace(std::move(w), RVector(rows, Rational(1)));
}

}  // namespace bfactory
