#include "adjustmcmc/graph.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace adjustmcmc {

namespace {

void check_node(int n, NodeId v) {
    if (v < 0 || v >= n)
        throw std::out_of_range("node " + std::to_string(v) + " out of range [0, " +
                                std::to_string(n) + ")");
}

void sorted_insert(std::vector<NodeId>& v, NodeId x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

bool sorted_contains(const std::vector<NodeId>& v, NodeId x) {
    return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

// --- Skeleton ---------------------------------------------------------------

Skeleton::Skeleton(int n, std::span<const Edge> edges) : m_neighbors(static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("negative node count");
    for (auto [a, b] : edges) {
        check_node(n, a);
        check_node(n, b);
        if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
        if (sorted_contains(m_neighbors[a], b))
            throw std::invalid_argument("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
        sorted_insert(m_neighbors[a], b);
        sorted_insert(m_neighbors[b], a);
    }
}

bool Skeleton::adjacent(NodeId a, NodeId b) const {
    return sorted_contains(m_neighbors.at(a), b);
}

std::vector<Edge> Skeleton::edges() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < n(); ++a)
        for (NodeId b : m_neighbors[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

std::size_t Skeleton::num_edges() const {
    std::size_t deg = 0;
    for (const auto& nb : m_neighbors) deg += nb.size();
    return deg / 2;
}

// --- Dag --------------------------------------------------------------------

Dag::Dag(int n, std::span<const Edge> edges)
    : m_parents(static_cast<std::size_t>(n)), m_children(static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("negative node count");
    for (auto [a, b] : edges) {
        check_node(n, a);
        check_node(n, b);
        if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
        if (sorted_contains(m_children[a], b) || sorted_contains(m_children[b], a))
            throw std::invalid_argument("more than one edge between " + std::to_string(a) +
                                        " and " + std::to_string(b));
        sorted_insert(m_children[a], b);
        sorted_insert(m_parents[b], a);
    }
    // Kahn: every node must be emitted
    std::vector<int> indeg(static_cast<std::size_t>(n));
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < n; ++v) {
        indeg[v] = static_cast<int>(m_parents[v].size());
        if (indeg[v] == 0) ready.push_back(v);
    }
    int seen = 0;
    while (!ready.empty()) {
        NodeId v = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId c : m_children[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    if (seen != n) throw std::invalid_argument("edge list contains a directed cycle");
}

bool Dag::has_edge(NodeId from, NodeId to) const {
    return sorted_contains(m_children.at(from), to);
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < n(); ++a)
        for (NodeId b : m_children[a]) out.emplace_back(a, b);
    return out;
}

std::size_t Dag::num_edges() const {
    std::size_t m = 0;
    for (const auto& ch : m_children) m += ch.size();
    return m;
}

Dag Dag::without_edges(std::span<const Edge> removed) const {
    Dag out = *this;
    for (auto [a, b] : removed) {
        auto& ch = out.m_children.at(a);
        auto it = std::lower_bound(ch.begin(), ch.end(), b);
        if (it == ch.end() || *it != b) continue;
        ch.erase(it);
        auto& pa = out.m_parents.at(b);
        pa.erase(std::lower_bound(pa.begin(), pa.end(), a));
    }
    return out;
}

Dag Dag::induced(const NodeSet& keep) const {
    Dag out(n());
    auto mask = keep.to_mask(n());
    for (NodeId a = 0; a < n(); ++a) {
        if (!mask[a]) continue;
        for (NodeId b : m_children[a]) {
            if (!mask[b]) continue;
            out.m_children[a].push_back(b);
            out.m_parents[b].push_back(a);
        }
    }
    for (auto& pa : out.m_parents) std::sort(pa.begin(), pa.end());
    return out;
}

// --- TopologicalOrder -------------------------------------------------------

TopologicalOrder::TopologicalOrder(std::vector<NodeId> perm)
    : m_perm(std::move(perm)), m_pos(m_perm.size(), -1) {
    const int n = static_cast<int>(m_perm.size());
    for (int i = 0; i < n; ++i) {
        NodeId v = m_perm[i];
        if (v < 0 || v >= n || m_pos[v] != -1)
            throw std::invalid_argument("ordering is not a permutation of [0, n)");
        m_pos[v] = i;
    }
}

TopologicalOrder TopologicalOrder::moved(NodeId node, int new_pos) const {
    check_node(n(), node);
    if (new_pos < 0 || new_pos >= n()) throw std::out_of_range("position out of range");
    std::vector<NodeId> perm = m_perm;
    perm.erase(perm.begin() + m_pos[node]);
    perm.insert(perm.begin() + new_pos, node);
    return TopologicalOrder(std::move(perm));
}

// --- Cpdag ------------------------------------------------------------------

Cpdag::Cpdag(int n, std::vector<Edge> directed, std::vector<Edge> undirected)
    : m_n(n), m_directed(std::move(directed)), m_undirected(std::move(undirected)) {
    for (auto& [a, b] : m_undirected)
        if (a > b) std::swap(a, b);
    std::sort(m_directed.begin(), m_directed.end());
    std::sort(m_undirected.begin(), m_undirected.end());
    for (auto [a, b] : m_directed)
        if (std::binary_search(m_undirected.begin(), m_undirected.end(), Edge{std::min(a, b), std::max(a, b)}))
            throw std::invalid_argument("edge both directed and undirected");
}

bool Cpdag::has_directed(NodeId from, NodeId to) const {
    return std::binary_search(m_directed.begin(), m_directed.end(), Edge{from, to});
}

bool Cpdag::has_undirected(NodeId a, NodeId b) const {
    return std::binary_search(m_undirected.begin(), m_undirected.end(), Edge{std::min(a, b), std::max(a, b)});
}

// --- queries ----------------------------------------------------------------

NodeSet relatives(const Dag& g, const NodeSet& nodes, Relation kind) {
    for (NodeId v : nodes) check_node(g.n(), v);
    std::vector<char> mark(static_cast<std::size_t>(g.n()), 0);
    if (kind == Relation::parents) {
        for (NodeId v : nodes)
            for (NodeId p : g.parents(v)) mark[p] = 1;
        return NodeSet::from_mask(mark);
    }
    std::vector<NodeId> stack(nodes.begin(), nodes.end());
    for (NodeId v : stack) mark[v] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        const auto& next = kind == Relation::ancestors ? g.parents(v) : g.children(v);
        for (NodeId w : next) {
            if (!mark[w]) {
                mark[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return NodeSet::from_mask(mark);
}

Skeleton skeleton_of(const Dag& g) {
    auto e = g.edges();
    return Skeleton(g.n(), e);
}

TopologicalOrder topological_order(const Dag& g) {
    const int n = g.n();
    std::vector<int> indeg(static_cast<std::size_t>(n));
    std::vector<NodeId> heap;  // min-heap of ready nodes
    for (NodeId v = 0; v < n; ++v) {
        indeg[v] = static_cast<int>(g.parents(v).size());
        if (indeg[v] == 0) heap.push_back(v);
    }
    std::make_heap(heap.begin(), heap.end(), std::greater<>());
    std::vector<NodeId> perm;
    perm.reserve(static_cast<std::size_t>(n));
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        NodeId v = heap.back();
        heap.pop_back();
        perm.push_back(v);
        for (NodeId c : g.children(v)) {
            if (--indeg[c] == 0) {
                heap.push_back(c);
                std::push_heap(heap.begin(), heap.end(), std::greater<>());
            }
        }
    }
    return TopologicalOrder(std::move(perm));
}

bool is_topological_order(const Dag& g, const TopologicalOrder& order) {
    if (order.n() != g.n()) return false;
    for (auto [a, b] : g.edges())
        if (!order.precedes(a, b)) return false;
    return true;
}

Dag orient(const Skeleton& skeleton, const TopologicalOrder& order) {
    if (order.n() != skeleton.n()) throw std::invalid_argument("ordering does not cover the skeleton");
    std::vector<Edge> edges;
    edges.reserve(skeleton.num_edges());
    for (auto [a, b] : skeleton.edges())
        edges.push_back(order.precedes(a, b) ? Edge{a, b} : Edge{b, a});
    return Dag(skeleton.n(), edges);
}

bool d_separated(const Dag& g, NodeId a, NodeId b, const NodeSet& z) {
    const int n = g.n();
    check_node(n, a);
    check_node(n, b);
    if (a == b) throw std::invalid_argument("d_separated: endpoints coincide");
    if (z.contains(a) || z.contains(b)) throw std::invalid_argument("d_separated: endpoint in conditioning set");

    NodeSet seeds = z;
    seeds.insert(a);
    seeds.insert(b);
    auto anc = ancestors_of(g, seeds).to_mask(n);
    auto cond = z.to_mask(n);

    // Moral graph of the ancestral set: skeleton edges plus married co-parents.
    std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        if (!anc[v]) continue;
        const auto& pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            adj[v].push_back(pa[i]);
            adj[pa[i]].push_back(v);
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                adj[pa[i]].push_back(pa[j]);
                adj[pa[j]].push_back(pa[i]);
            }
        }
    }

    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> stack{a};
    seen[a] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : adj[v]) {
            if (seen[w] || cond[w]) continue;
            if (w == b) return false;
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    return true;
}

std::vector<std::tuple<NodeId, NodeId, NodeId>> v_structures(const Dag& g) {
    std::vector<std::tuple<NodeId, NodeId, NodeId>> out;
    for (NodeId c = 0; c < g.n(); ++c) {
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) out.emplace_back(pa[i], c, pa[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Cpdag cpdag_of(const Dag& g) {
    const int n = g.n();
    // state[a][b]: 0 none, 1 undirected, 2 a→b, 3 b→a
    std::vector<std::vector<unsigned char>> st(static_cast<std::size_t>(n),
                                               std::vector<unsigned char>(static_cast<std::size_t>(n), 0));
    for (auto [a, b] : g.edges()) st[a][b] = st[b][a] = 1;
    auto orient_edge = [&](NodeId from, NodeId to) {
        st[from][to] = 2;
        st[to][from] = 3;
    };
    auto directed = [&](NodeId from, NodeId to) { return st[from][to] == 2; };
    auto undirected = [&](NodeId a, NodeId b) { return st[a][b] == 1; };
    auto adjacent = [&](NodeId a, NodeId b) { return st[a][b] != 0; };

    for (auto [a, c, b] : v_structures(g)) {
        orient_edge(a, c);
        orient_edge(b, c);
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = 0; v < n; ++v) {
                if (!undirected(u, v)) continue;
                bool fire = false;
                for (NodeId w = 0; w < n && !fire; ++w) {
                    if (w == u || w == v) continue;
                    // R1: w → u – v, w and v nonadjacent
                    if (directed(w, u) && !adjacent(w, v)) fire = true;
                    // R2: u → w → v with u – v
                    else if (directed(u, w) && directed(w, v)) fire = true;
                }
                // R3: u – w1 → v, u – w2 → v, w1 and w2 nonadjacent
                for (NodeId w1 = 0; w1 < n && !fire; ++w1) {
                    if (w1 == u || w1 == v || !undirected(u, w1) || !directed(w1, v)) continue;
                    for (NodeId w2 = w1 + 1; w2 < n && !fire; ++w2) {
                        if (w2 == u || w2 == v || !undirected(u, w2) || !directed(w2, v)) continue;
                        if (!adjacent(w1, w2)) fire = true;
                    }
                }
                if (fire) {
                    orient_edge(u, v);
                    changed = true;
                }
            }
        }
    }

    std::vector<Edge> dir, und;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b) {
            if (st[a][b] == 2) dir.emplace_back(a, b);
            else if (st[a][b] == 1 && a < b) und.emplace_back(a, b);
        }
    return Cpdag(n, std::move(dir), std::move(und));
}

int shd(const Dag& a, const Dag& b) {
    if (a.n() != b.n()) throw std::invalid_argument("shd: graphs have different node counts");
    int d = 0;
    for (NodeId u = 0; u < a.n(); ++u)
        for (NodeId v = u + 1; v < a.n(); ++v) {
            int sa = a.has_edge(u, v) ? 1 : a.has_edge(v, u) ? 2 : 0;
            int sb = b.has_edge(u, v) ? 1 : b.has_edge(v, u) ? 2 : 0;
            if (sa != sb) d += 2;
        }
    return d;
}

}  // namespace adjustmcmc
