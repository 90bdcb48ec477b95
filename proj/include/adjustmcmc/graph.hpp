#pragma once

#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "adjustmcmc/node_set.hpp"

namespace adjustmcmc {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph over nodes [0, n).
class Skeleton {
public:
    Skeleton() = default;
    /// Throws std::invalid_argument on self-loops, duplicates or out-of-range ids.
    Skeleton(int n, std::span<const Edge> edges);

    int n() const { return static_cast<int>(m_neighbors.size()); }
    const std::vector<NodeId>& neighbors(NodeId v) const { return m_neighbors.at(v); }
    bool adjacent(NodeId a, NodeId b) const;
    /// Unordered pairs as (min, max), sorted.
    std::vector<Edge> edges() const;
    std::size_t num_edges() const;

    friend bool operator==(const Skeleton&, const Skeleton&) = default;

private:
    std::vector<std::vector<NodeId>> m_neighbors;
};

/// Directed acyclic graph over nodes [0, n). Immutable after construction.
class Dag {
public:
    Dag() = default;
    explicit Dag(int n) : m_parents(n), m_children(n) {}
    /// Throws std::invalid_argument if the edge list has a cycle, a self-loop,
    /// a duplicated or anti-parallel pair, or an out-of-range id.
    Dag(int n, std::span<const Edge> edges);

    int n() const { return static_cast<int>(m_parents.size()); }
    const std::vector<NodeId>& parents(NodeId v) const { return m_parents.at(v); }
    const std::vector<NodeId>& children(NodeId v) const { return m_children.at(v); }
    bool has_edge(NodeId from, NodeId to) const;
    bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }
    /// (parent, child) pairs sorted lexicographically.
    std::vector<Edge> edges() const;
    std::size_t num_edges() const;

    /// Copy without the listed edges (absent edges are ignored).
    Dag without_edges(std::span<const Edge> removed) const;
    /// Subgraph induced by `keep`; node ids are preserved, other nodes become isolated.
    Dag induced(const NodeSet& keep) const;

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    std::vector<std::vector<NodeId>> m_parents;
    std::vector<std::vector<NodeId>> m_children;
};

/// Permutation of [0, n) with position lookup.
class TopologicalOrder {
public:
    TopologicalOrder() = default;
    /// Throws std::invalid_argument if `perm` is not a permutation.
    explicit TopologicalOrder(std::vector<NodeId> perm);

    int n() const { return static_cast<int>(m_perm.size()); }
    const std::vector<NodeId>& perm() const { return m_perm; }
    int position(NodeId v) const { return m_pos.at(v); }
    bool precedes(NodeId a, NodeId b) const { return m_pos.at(a) < m_pos.at(b); }
    NodeId operator[](int i) const { return m_perm.at(i); }

    /// Removes `node` and reinserts it so that it ends at index `new_pos`.
    TopologicalOrder moved(NodeId node, int new_pos) const;

    friend bool operator==(const TopologicalOrder& a, const TopologicalOrder& b) {
        return a.m_perm == b.m_perm;
    }

private:
    std::vector<NodeId> m_perm;
    std::vector<int> m_pos;
};

/// Completed partially directed graph representing a Markov equivalence class.
class Cpdag {
public:
    Cpdag() = default;
    Cpdag(int n, std::vector<Edge> directed, std::vector<Edge> undirected);

    int n() const { return m_n; }
    const std::vector<Edge>& directed_edges() const { return m_directed; }
    /// Stored as (min, max).
    const std::vector<Edge>& undirected_edges() const { return m_undirected; }
    bool has_directed(NodeId from, NodeId to) const;
    bool has_undirected(NodeId a, NodeId b) const;

    friend bool operator==(const Cpdag&, const Cpdag&) = default;

private:
    int m_n = 0;
    std::vector<Edge> m_directed;
    std::vector<Edge> m_undirected;
};

enum class Relation { parents, ancestors, descendants };

/// Union of the relatives of every node in `nodes`. Ancestors and descendants
/// include the nodes themselves; parents do not.
NodeSet relatives(const Dag& g, const NodeSet& nodes, Relation kind);

inline NodeSet parents_of(const Dag& g, const NodeSet& s) { return relatives(g, s, Relation::parents); }
inline NodeSet ancestors_of(const Dag& g, const NodeSet& s) { return relatives(g, s, Relation::ancestors); }
inline NodeSet descendants_of(const Dag& g, const NodeSet& s) { return relatives(g, s, Relation::descendants); }

Skeleton skeleton_of(const Dag& g);

/// Smallest-index-first Kahn ordering.
TopologicalOrder topological_order(const Dag& g);

bool is_topological_order(const Dag& g, const TopologicalOrder& order);

/// Orients each skeleton edge from the earlier to the later node of `order`.
Dag orient(const Skeleton& skeleton, const TopologicalOrder& order);

/// d-separation of `a` and `b` given `z`, by connectivity in the moralized
/// ancestral graph of {a, b} ∪ z. Throws if a == b or either endpoint is in z.
bool d_separated(const Dag& g, NodeId a, NodeId b, const NodeSet& z);

/// Unshielded colliders a → c ← b as (a, c, b) with a < b.
std::vector<std::tuple<NodeId, NodeId, NodeId>> v_structures(const Dag& g);

/// CPDAG of the Markov equivalence class of `g`: v-structures, then Meek
/// rules 1-3 to closure.
Cpdag cpdag_of(const Dag& g);

/// Structural Hamming distance counting differing edge marks: each unordered
/// pair contributes 0 if both graphs agree on it and 2 otherwise (a reversed,
/// missing or extra edge changes both endpoint marks).
int shd(const Dag& a, const Dag& b);

}  // namespace adjustmcmc
