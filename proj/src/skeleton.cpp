#include "adjustmcmc/skeleton.hpp"

#include <numeric>
#include <stdexcept>

namespace adjustmcmc {

void SkeletonConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (max_cond_size < 0) throw std::invalid_argument("max_cond_size must be non-negative");
}

namespace {

// Calls visit(subset) for every size-k subset of `pool`; stops early when visit returns true.
template <typename Visit>
bool any_subset(const std::vector<NodeId>& pool, int k, Visit&& visit) {
    const int m = static_cast<int>(pool.size());
    if (k > m) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<NodeId> members;
        for (int i : idx) members.push_back(pool[i]);
        if (visit(NodeSet(std::move(members)))) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

Skeleton estimate_skeleton(const Dataset& data, const SkeletonConfig& cfg) {
    cfg.validate();
    data.validate();
    if (data.rows() <= cfg.max_cond_size + 3)
        throw std::invalid_argument("estimate_skeleton: need more rows than max_cond_size + 3");
    const int n = data.cols();
    const FisherZTest test(data);

    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 1));
    for (int i = 0; i < n; ++i) adj[i][i] = 0;

    for (int level = 0; level <= cfg.max_cond_size; ++level) {
        const auto snapshot = adj;
        auto neighbors_except = [&](NodeId v, NodeId skip) {
            std::vector<NodeId> out;
            for (NodeId w = 0; w < n; ++w)
                if (snapshot[v][w] && w != skip) out.push_back(w);
            return out;
        };
        bool any_testable = false;
        std::vector<Edge> removed;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                if (!snapshot[i][j]) continue;
                auto separates = [&](const NodeSet& s) { return test.independent(i, j, s, cfg.alpha); };
                auto pool_i = neighbors_except(i, j);
                auto pool_j = neighbors_except(j, i);
                if (static_cast<int>(pool_i.size()) >= level || static_cast<int>(pool_j.size()) >= level)
                    any_testable = true;
                if (any_subset(pool_i, level, separates) || any_subset(pool_j, level, separates))
                    removed.emplace_back(i, j);
            }
        }
        for (auto [i, j] : removed) adj[i][j] = adj[j][i] = 0;
        if (!any_testable) break;
    }

    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (adj[i][j]) edges.emplace_back(i, j);
    return Skeleton(n, edges);
}

std::vector<NodeId> parents_under(const Skeleton& skeleton, const TopologicalOrder& order, NodeId v) {
    std::vector<NodeId> parents;
    for (NodeId w : skeleton.neighbors(v))
        if (order.precedes(w, v)) parents.push_back(w);
    return parents;
}

TopologicalOrder random_order(int n, NodeId x, NodeId y, Rng& rng) {
    std::vector<NodeId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto px = std::find(perm.begin(), perm.end(), x);
    auto py = std::find(perm.begin(), perm.end(), y);
    if (py < px) std::iter_swap(px, py);
    return TopologicalOrder(std::move(perm));
}

namespace {

OrderSearchResult climb(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y, Rng& rng,
                        ScoreCache& cache) {
    const int n = skeleton.n();
    TopologicalOrder order = random_order(n, x, y, rng);

    auto score_of = [&](const TopologicalOrder& o) {
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) total += cache.local(data, v, parents_under(skeleton, o, v));
        return total;
    };
    double score = score_of(order);
    // Equivalent orientations score equal up to rounding; require a real gain.
    constexpr double kMinGain = 1e-9;

    bool improved = true;
    for (int sweep = 0; improved && sweep < 100 * n; ++sweep) {
        improved = false;
        for (NodeId v = 0; v < n; ++v) {
            int best_pos = -1;
            double best = score;
            for (int pos = 0; pos < n; ++pos) {
                if (pos == order.position(v)) continue;
                TopologicalOrder cand = order.moved(v, pos);
                if (!cand.precedes(x, y)) continue;
                const double s = score_of(cand);
                if (s > best + kMinGain) {
                    best = s;
                    best_pos = pos;
                }
            }
            if (best_pos >= 0) {
                order = order.moved(v, best_pos);
                score = best;
                improved = true;
            }
        }
    }
    Dag dag = orient(skeleton, order);
    return {std::move(order), std::move(dag), score};
}

}  // namespace

OrderSearchResult greedy_order_search(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y,
                                      Rng& rng, ScoreCache& cache, int restarts) {
    if (data.cols() != skeleton.n()) throw std::invalid_argument("skeleton size does not match dataset width");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");
    OrderSearchResult best = climb(data, skeleton, x, y, rng, cache);
    for (int r = 1; r < restarts; ++r) {
        OrderSearchResult next = climb(data, skeleton, x, y, rng, cache);
        if (next.score > best.score + 1e-9) best = std::move(next);
    }
    return best;
}

Dag initial_dag(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y, Rng& rng, int restarts) {
    ScoreCache cache;
    return greedy_order_search(data, skeleton, x, y, rng, cache, restarts).dag;
}

}  // namespace adjustmcmc
