#include "adjustmcmc/adjust.hpp"

#include <stdexcept>
#include <string>

namespace adjustmcmc {

namespace {

void check_pair(const Dag& g, NodeId x, NodeId y) {
    if (x < 0 || x >= g.n() || y < 0 || y >= g.n()) throw std::out_of_range("treatment/outcome out of range");
    if (x == y) throw std::invalid_argument("treatment and outcome must differ");
}

void check_candidate(const NodeSet& a, NodeId x, NodeId y) {
    if (a.contains(x) || a.contains(y))
        throw std::invalid_argument("adjustment set contains treatment or outcome");
}

using Adjacency = std::vector<std::vector<NodeId>>;

Adjacency undirected_adjacency(const Dag& g) {
    Adjacency adj(static_cast<std::size_t>(g.n()));
    for (auto [a, b] : g.edges()) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

bool connected(const Adjacency& adj, NodeId from, NodeId to) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<NodeId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (NodeId w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return false;
}

// Nodes of the biconnected block that contains edge {x, y}. `adj` must hold that edge.
NodeSet block_containing(const Adjacency& adj, NodeId x, NodeId y) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    struct Frame {
        NodeId v;
        NodeId parent;
        std::size_t next;
    };
    std::vector<Frame> frames;
    std::vector<Edge> edge_stack;
    int clock = 0;

    disc[x] = low[x] = clock++;
    frames.push_back({x, -1, 0});
    while (!frames.empty()) {
        Frame& f = frames.back();
        NodeId v = f.v;
        if (f.next < adj[v].size()) {
            NodeId w = adj[v][f.next++];
            if (disc[w] == -1) {
                edge_stack.emplace_back(v, w);
                disc[w] = low[w] = clock++;
                frames.push_back({w, v, 0});
            } else if (w != f.parent && disc[w] < disc[v]) {
                edge_stack.emplace_back(v, w);
                low[v] = std::min(low[v], disc[w]);
            }
            continue;
        }
        frames.pop_back();
        if (frames.empty()) break;
        NodeId u = frames.back().v;
        low[u] = std::min(low[u], low[v]);
        if (low[v] < disc[u]) continue;
        // u is an articulation point (or root) for the block below it.
        NodeSet block;
        bool has_xy = false;
        while (!edge_stack.empty()) {
            Edge e = edge_stack.back();
            edge_stack.pop_back();
            block.insert(e.first);
            block.insert(e.second);
            if ((e.first == x && e.second == y) || (e.first == y && e.second == x)) has_xy = true;
            if (e == Edge{u, v}) break;
        }
        if (has_xy) return block;
    }
    return {};
}

// Max-flow check for two vertex-disjoint paths from {s1, s2} to {t1, t2} in
// `adj` with `banned` removed. Zero-length paths are allowed.
class DisjointPaths {
public:
    explicit DisjointPaths(const Adjacency& adj) : m_adj(adj) {}

    bool two_paths(NodeId s1, NodeId s2, NodeId t1, NodeId t2, NodeId banned) {
        const int n = static_cast<int>(m_adj.size());
        const int nodes = 2 * n + 2;
        const int source = 2 * n, sink = 2 * n + 1;
        m_head.assign(static_cast<std::size_t>(nodes), -1);
        m_arcs.clear();
        for (NodeId v = 0; v < n; ++v) {
            if (v == banned) continue;
            add_arc(in(v), out(v));
            for (NodeId w : m_adj[v])
                if (w != banned) add_arc(out(v), in(w));
        }
        add_arc(source, in(s1));
        add_arc(source, in(s2));
        add_arc(out(t1), sink);
        add_arc(out(t2), sink);

        int flow = 0;
        std::vector<int> via(static_cast<std::size_t>(nodes));
        while (flow < 2) {
            std::fill(via.begin(), via.end(), -1);
            std::vector<int> queue{source};
            via[source] = -2;
            for (std::size_t qi = 0; qi < queue.size() && via[sink] == -1; ++qi) {
                int u = queue[qi];
                for (int a = m_head[u]; a != -1; a = m_arcs[a].next) {
                    if (m_arcs[a].cap == 0 || via[m_arcs[a].to] != -1) continue;
                    via[m_arcs[a].to] = a;
                    queue.push_back(m_arcs[a].to);
                }
            }
            if (via[sink] == -1) break;
            for (int v = sink; v != source;) {
                int a = via[v];
                m_arcs[a].cap -= 1;
                m_arcs[a ^ 1].cap += 1;
                v = m_arcs[a ^ 1].to;
            }
            ++flow;
        }
        return flow == 2;
    }

private:
    struct Arc {
        int to;
        int cap;
        int next;
    };
    static int in(NodeId v) { return 2 * v; }
    static int out(NodeId v) { return 2 * v + 1; }
    void add_arc(int from, int to) {
        m_arcs.push_back({to, 1, m_head[from]});
        m_head[from] = static_cast<int>(m_arcs.size()) - 1;
        m_arcs.push_back({from, 0, m_head[to]});
        m_head[to] = static_cast<int>(m_arcs.size()) - 1;
    }

    const Adjacency& m_adj;
    std::vector<int> m_head;
    std::vector<Arc> m_arcs;
};

}  // namespace

NodeSet causal_nodes(const Dag& g, NodeId x, NodeId y) {
    check_pair(g, x, y);
    NodeSet cn = descendants_of(g, {x}) & ancestors_of(g, {y});
    cn.erase(x);
    return cn;
}

NodeSet forbidden_set(const Dag& g, NodeId x, NodeId y) {
    NodeSet forb = descendants_of(g, causal_nodes(g, x, y));
    forb.insert(x);
    return forb;
}

ReachInfo reachable_and_colliders(const Dag& g, NodeId x, NodeId y) {
    check_pair(g, x, y);
    ReachInfo info;
    info.restricted = Dag(g.n());
    Adjacency adj = undirected_adjacency(g);
    if (!connected(adj, x, y)) return info;

    if (!g.adjacent(x, y)) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    info.rch = block_containing(adj, x, y);
    info.restricted = g.induced(info.rch);

    Adjacency radj = undirected_adjacency(info.restricted);
    DisjointPaths flow(radj);
    for (NodeId c : info.rch) {
        if (c == x || c == y) continue;
        const auto& pa = info.restricted.parents(c);
        bool collider = false;
        for (std::size_t i = 0; i < pa.size() && !collider; ++i)
            for (std::size_t j = i + 1; j < pa.size() && !collider; ++j)
                collider = flow.two_paths(x, y, pa[i], pa[j], c);
        if (collider) info.clr.insert(c);
    }
    return info;
}

Dag proper_backdoor_graph(const Dag& g, NodeId x, NodeId y) {
    check_pair(g, x, y);
    NodeSet an_y = ancestors_of(g, {y});
    std::vector<Edge> removed;
    for (NodeId c : g.children(x))
        if (an_y.contains(c)) removed.emplace_back(x, c);
    return g.without_edges(removed);
}

NodeSet optimal_adjustment_set(const Dag& g, NodeId x, NodeId y) {
    return parents_of(g, causal_nodes(g, x, y)) - forbidden_set(g, x, y);
}

AdjCache build_adj_cache(const Dag& g, NodeId x, NodeId y) {
    check_pair(g, x, y);
    AdjCache c;
    c.x = x;
    c.y = y;
    c.causal = causal_nodes(g, x, y);
    c.forb = descendants_of(g, c.causal);
    c.forb.insert(x);
    auto reach = reachable_and_colliders(g, x, y);
    c.rch = std::move(reach.rch);
    c.clr = std::move(reach.clr);
    c.restricted = std::move(reach.restricted);
    for (NodeId v : c.clr) c.collider_descendants.emplace(v, descendants_of(g, {v}));
    c.backdoor = proper_backdoor_graph(g, x, y);
    c.optimal = parents_of(g, c.causal) - c.forb;
    return c;
}

bool is_valid_adjustment(const AdjCache& cache, const NodeSet& a) {
    check_candidate(a, cache.x, cache.y);
    if (a.intersects(cache.forb)) return false;
    return d_separated(cache.backdoor, cache.x, cache.y, a);
}

bool is_valid_adjustment(const Dag& g, NodeId x, NodeId y, const NodeSet& a) {
    check_pair(g, x, y);
    check_candidate(a, x, y);
    if (a.intersects(forbidden_set(g, x, y))) return false;
    return d_separated(proper_backdoor_graph(g, x, y), x, y, a);
}

std::vector<NodeSet> enumerate_all_valid(const Dag& g, NodeId x, NodeId y, int max_nodes) {
    check_pair(g, x, y);
    if (g.n() > max_nodes)
        throw std::length_error("enumerate_all_valid: " + std::to_string(g.n()) +
                                " nodes exceeds bound " + std::to_string(max_nodes));
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < g.n(); ++v)
        if (v != x && v != y) pool.push_back(v);
    const AdjCache cache = build_adj_cache(g, x, y);
    std::vector<NodeSet> out;
    const unsigned long long subsets = 1ULL << pool.size();
    for (unsigned long long bits = 0; bits < subsets; ++bits) {
        std::vector<NodeId> members;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (bits >> i & 1ULL) members.push_back(pool[i]);
        NodeSet a(std::move(members));
        if (is_valid_adjustment(cache, a)) out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeSet> near_optimal_candidates(const NodeSet& optimal, int depth) {
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    const auto& ids = optimal.ids();
    const int k = static_cast<int>(ids.size());
    const int min_size = std::max(0, k - depth);
    std::vector<NodeSet> out;
    // Choose which members to drop, for drop counts 0 .. k - min_size.
    for (int drop = 0; drop <= k - min_size; ++drop) {
        std::vector<NodeSet> level;
        std::vector<int> idx(static_cast<std::size_t>(drop));
        for (int i = 0; i < drop; ++i) idx[i] = i;
        while (true) {
            NodeSet s = optimal;
            for (int i : idx) s.erase(ids[i]);
            level.push_back(std::move(s));
            int i = drop - 1;
            while (i >= 0 && idx[i] == k - drop + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < drop; ++j) idx[j] = idx[j - 1] + 1;
        }
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<NodeSet> enumerate_near_optimal(const AdjCache& cache, int depth) {
    std::vector<NodeSet> out;
    for (auto& s : near_optimal_candidates(cache.optimal, depth))
        if (is_valid_adjustment(cache, s)) out.push_back(std::move(s));
    return out;
}

std::vector<NodeSet> enumerate_near_optimal(const Dag& g, NodeId x, NodeId y, int depth) {
    return enumerate_near_optimal(build_adj_cache(g, x, y), depth);
}

NodeSet improve_toward_optimal(const Dag& g, NodeId x, NodeId y, const NodeSet& a) {
    const AdjCache cache = build_adj_cache(g, x, y);
    if (!is_valid_adjustment(cache, a))
        throw std::invalid_argument("improve_toward_optimal: " + a.to_string() + " is not a valid adjustment set");
    NodeSet out = descendants_of(g, a) & cache.optimal;
    if (is_valid_adjustment(cache, out)) return out;
    for (NodeId v : cache.optimal) {
        if (out.contains(v)) continue;
        out.insert(v);
        if (is_valid_adjustment(cache, out)) return out;
    }
    // Unreachable: opadj is valid whenever any valid set exists.
    throw std::logic_error("improve_toward_optimal: optimal set is not valid");
}

NodeSet prune_after_y(const Dag& g, NodeId x, NodeId y, const TopologicalOrder& order, const NodeSet& a) {
    if (!is_topological_order(g, order)) throw std::invalid_argument("prune_after_y: not a topological order of the graph");
    if (!order.precedes(x, y)) throw std::invalid_argument("prune_after_y: treatment must precede outcome");
    if (!is_valid_adjustment(g, x, y, a))
        throw std::invalid_argument("prune_after_y: " + a.to_string() + " is not a valid adjustment set");
    std::vector<NodeId> kept;
    for (NodeId v : a)
        if (order.position(v) < order.position(y)) kept.push_back(v);
    return NodeSet(std::move(kept));
}

bool is_amenable(const Cpdag& c, NodeId x, NodeId y) {
    const int n = c.n();
    if (x < 0 || x >= n || y < 0 || y >= n) throw std::out_of_range("treatment/outcome out of range");
    if (x == y) throw std::invalid_argument("treatment and outcome must differ");
    // Edges usable in the forward direction by a possibly directed path.
    Adjacency forward(static_cast<std::size_t>(n));
    for (auto [a, b] : c.directed_edges()) forward[a].push_back(b);
    for (auto [a, b] : c.undirected_edges()) {
        forward[a].push_back(b);
        forward[b].push_back(a);
    }
    for (auto [a, b] : c.undirected_edges()) {
        if (a != x && b != x) continue;
        NodeId w = a == x ? b : a;
        if (w == y) return false;
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        seen[x] = seen[w] = 1;
        std::vector<NodeId> stack{w};
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId u : forward[v]) {
                if (seen[u]) continue;
                if (u == y) return false;
                seen[u] = 1;
                stack.push_back(u);
            }
        }
    }
    return true;
}

}  // namespace adjustmcmc
