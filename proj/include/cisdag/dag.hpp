#pragma once

// DAG structure operations: topological orderings, v-structures, Markov
// equivalence, covered/trivially covered edge flips, and the equivalence
// classes they generate.  Class enumeration canonicalizes each graph by its
// sorted edge list, so closure sets are deterministic.

#include <algorithm>
#include <cstddef>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cisdag/errors.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/model.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {

using Edge = std::pair<std::size_t, std::size_t>; // (i, j) means i -> j

class Dag {
public:
    Dag() = default;

    Dag(std::size_t m, const std::vector<Edge>& edges) : m_(m) {
        for (const Edge& e : edges) {
            if (e.first >= m_ || e.second >= m_)
                throw DimensionMismatch("edge " + std::to_string(e.first + 1) + "->" +
                                        std::to_string(e.second + 1) + " out of range");
            if (e.first == e.second)
                throw std::invalid_argument("self-loop at node " + std::to_string(e.first + 1));
            if (!edges_.insert(e).second)
                throw std::invalid_argument("duplicate edge " + std::to_string(e.first + 1) +
                                            "->" + std::to_string(e.second + 1));
        }
        if (!is_acyclic())
            throw std::invalid_argument("graph has a directed cycle");
    }

    std::size_t node_count() const { return m_; }
    const std::set<Edge>& edges() const { return edges_; }

    bool has_edge(std::size_t i, std::size_t j) const { return edges_.count({i, j}) > 0; }
    bool adjacent(std::size_t i, std::size_t j) const { return has_edge(i, j) || has_edge(j, i); }

    std::vector<std::size_t> parents(std::size_t j) const {
        std::vector<std::size_t> p;
        for (const Edge& e : edges_)
            if (e.second == j) p.push_back(e.first);
        return p; // sorted: edges_ is ordered by (first, second)
    }

    std::set<Edge> skeleton() const {
        std::set<Edge> s;
        for (const Edge& e : edges_) s.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
        return s;
    }

    Dag with_flipped(const Edge& e) const {
        if (!has_edge(e.first, e.second))
            throw std::invalid_argument("cannot flip absent edge");
        std::vector<Edge> es(edges_.begin(), edges_.end());
        es.erase(std::find(es.begin(), es.end(), e));
        es.push_back({e.second, e.first});
        return Dag(m_, es);
    }

    bool operator<(const Dag& o) const {
        if (m_ != o.m_) return m_ < o.m_;
        return edges_ < o.edges_;
    }
    bool operator==(const Dag& o) const { return m_ == o.m_ && edges_ == o.edges_; }

private:
    bool is_acyclic() const {
        std::vector<std::size_t> indeg(m_, 0);
        for (const Edge& e : edges_) ++indeg[e.second];
        std::queue<std::size_t> q;
        for (std::size_t v = 0; v < m_; ++v)
            if (indeg[v] == 0) q.push(v);
        std::size_t seen = 0;
        while (!q.empty()) {
            const std::size_t v = q.front();
            q.pop();
            ++seen;
            for (const Edge& e : edges_)
                if (e.first == v && --indeg[e.second] == 0) q.push(e.second);
        }
        return seen == m_;
    }

    std::size_t m_ = 0;
    std::set<Edge> edges_;
};

struct VStructure {
    std::size_t left;
    std::size_t collider;
    std::size_t right; // left < right

    bool operator<(const VStructure& o) const {
        if (collider != o.collider) return collider < o.collider;
        if (left != o.left) return left < o.left;
        return right < o.right;
    }
    bool operator==(const VStructure& o) const {
        return left == o.left && collider == o.collider && right == o.right;
    }
};

// Smallest-label-first Kahn walk; every DAG has one, no cap needed.
inline Ordering one_topological_ordering(const Dag& g) {
    const std::size_t m = g.node_count();
    std::vector<std::size_t> indeg(m, 0);
    for (const Edge& e : g.edges()) ++indeg[e.second];
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < m; ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<std::size_t> perm;
    while (!ready.empty()) {
        const std::size_t v = *ready.begin();
        ready.erase(ready.begin());
        perm.push_back(v);
        for (const Edge& e : g.edges())
            if (e.first == v && --indeg[e.second] == 0) ready.insert(e.second);
    }
    return Ordering(std::move(perm));
}

namespace detail {

inline void topo_rec(const Dag& g, std::vector<std::size_t>& indeg, std::vector<bool>& placed,
                     std::vector<std::size_t>& prefix, std::vector<Ordering>& out) {
    const std::size_t m = g.node_count();
    if (prefix.size() == m) {
        out.emplace_back(prefix);
        return;
    }
    for (std::size_t v = 0; v < m; ++v) {
        if (placed[v] || indeg[v] != 0) continue;
        placed[v] = true;
        prefix.push_back(v);
        for (const Edge& e : g.edges())
            if (e.first == v) --indeg[e.second];
        topo_rec(g, indeg, placed, prefix, out);
        for (const Edge& e : g.edges())
            if (e.first == v) ++indeg[e.second];
        prefix.pop_back();
        placed[v] = false;
    }
}

} // namespace detail

inline std::vector<Ordering> topological_orderings(const Dag& g, std::size_t cap = 10) {
    if (g.node_count() > cap)
        throw DimensionTooLarge("topological_orderings: " + std::to_string(g.node_count()) +
                                " nodes exceeds cap " + std::to_string(cap));
    std::vector<std::size_t> indeg(g.node_count(), 0);
    for (const Edge& e : g.edges()) ++indeg[e.second];
    std::vector<bool> placed(g.node_count(), false);
    std::vector<std::size_t> prefix;
    std::vector<Ordering> out;
    detail::topo_rec(g, indeg, placed, prefix, out);
    return out;
}

inline std::vector<VStructure> v_structures(const Dag& g) {
    std::vector<VStructure> out;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const std::vector<std::size_t> pa = g.parents(k);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b)
                if (!g.adjacent(pa[a], pa[b])) out.push_back({pa[a], k, pa[b]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool markov_equivalent(const Dag& g, const Dag& h) {
    if (g.node_count() != h.node_count())
        throw DimensionMismatch("markov_equivalent: node counts differ");
    return g.skeleton() == h.skeleton() && v_structures(g) == v_structures(h);
}

// Edges i -> j with Pa(i) = Pa(j) \ {i}; reversal is re-checked for
// acyclicity defensively even though covered flips preserve it.
inline std::vector<Edge> covered_edges(const Dag& g) {
    std::vector<Edge> out;
    for (const Edge& e : g.edges()) {
        std::vector<std::size_t> pi = g.parents(e.first);
        std::vector<std::size_t> pj = g.parents(e.second);
        pj.erase(std::find(pj.begin(), pj.end(), e.first));
        if (pi != pj) continue;
        try {
            g.with_flipped(e);
        } catch (const std::invalid_argument&) {
            continue;
        }
        out.push_back(e);
    }
    return out;
}

// Edges i -> j with Pa(i) empty and Pa(j) = {i}.
inline std::vector<Edge> trivially_covered_edges(const Dag& g) {
    std::vector<Edge> out;
    for (const Edge& e : g.edges()) {
        if (!g.parents(e.first).empty()) continue;
        const std::vector<std::size_t> pj = g.parents(e.second);
        if (pj.size() == 1 && pj[0] == e.first) out.push_back(e);
    }
    return out;
}

namespace detail {

template <typename EdgePicker>
std::set<Dag> flip_closure(const Dag& g, std::size_t cap, EdgePicker pick) {
    if (g.node_count() > cap)
        throw DimensionTooLarge("equivalence class: " + std::to_string(g.node_count()) +
                                " nodes exceeds cap " + std::to_string(cap));
    std::set<Dag> seen{g};
    std::queue<Dag> frontier;
    frontier.push(g);
    while (!frontier.empty()) {
        const Dag cur = frontier.front();
        frontier.pop();
        for (const Edge& e : pick(cur)) {
            Dag next = cur.with_flipped(e);
            if (seen.insert(next).second) frontier.push(next);
        }
    }
    return seen;
}

} // namespace detail

inline std::set<Dag> markov_class(const Dag& g, std::size_t cap = 10) {
    return detail::flip_closure(g, cap, [](const Dag& d) { return covered_edges(d); });
}

inline std::set<Dag> cis_markov_class(const Dag& g, std::size_t cap = 10) {
    return detail::flip_closure(g, cap, [](const Dag& d) { return trivially_covered_edges(d); });
}

// Nodes that no CIS ordering can place last: parents {i, j} of an unshielded
// collider with K_ij positive beyond tolerance.  Sound but not complete.
// The covariance is required to be DAG-positive for g; that precondition is
// checked heuristically through the SEM signs under a topological ordering.
inline std::set<std::size_t> forbidden_last_nodes(const Dag& g, const CovariancePair& cp,
                                                  const Tolerance& tol = {}) {
    if (g.node_count() != cp.dim())
        throw DimensionMismatch("forbidden_last_nodes: graph/covariance dimension mismatch");
    const SemParams sem = precision_to_sem(cp, one_topological_ordering(g), tol);
    double scale = 1.0;
    for (std::size_t i = 0; i < sem.dim(); ++i)
        for (std::size_t j = 0; j < sem.dim(); ++j)
            scale = std::max(scale, std::abs(sem.lambda()(i, j)));
    const double slack = 1e-6 * scale;
    for (std::size_t i = 0; i < sem.dim(); ++i)
        for (std::size_t j = 0; j < sem.dim(); ++j) {
            const double lij = sem.lambda()(i, j);
            if (g.has_edge(j, i)) {
                if (lij < -slack)
                    throw ModelMismatch("negative coefficient " + std::to_string(lij) +
                                        " on edge " + std::to_string(j + 1) + "->" +
                                        std::to_string(i + 1));
            } else if (std::abs(lij) > slack) {
                throw ModelMismatch("covariance implies coefficient off the graph support at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
        }
    std::set<std::size_t> out;
    const SymMatrix& k = cp.precision;
    for (const VStructure& vs : v_structures(g)) {
        const double thresh = tol.threshold(std::sqrt(k(vs.left, vs.left) * k(vs.right, vs.right)));
        if (k(vs.left, vs.right) > thresh) {
            out.insert(vs.left);
            out.insert(vs.right);
        }
    }
    return out;
}

} // namespace cisdag
