#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "adjustmcmc/graph.hpp"

// Seeded generators for property tests, independent of the library's own.
namespace gen {

using adjustmcmc::Dag;
using adjustmcmc::Edge;
using adjustmcmc::NodeId;
using adjustmcmc::NodeSet;

inline Dag random_dag(std::mt19937_64& rng, int n, double p) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
    return Dag(n, edges);
}

inline NodeSet random_subset(std::mt19937_64& rng, int n, double p = 0.5) {
    std::bernoulli_distribution coin(p);
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < n; ++v)
        if (coin(rng)) ids.push_back(v);
    return NodeSet(ids);
}

// A pair (x, y) with x a proper ancestor of y, or {-1,-1} if none exists.
inline Edge ancestor_pair(std::mt19937_64& rng, const Dag& g) {
    std::vector<Edge> pairs;
    for (NodeId a = 0; a < g.n(); ++a) {
        std::vector<bool> seen(g.n(), false);
        std::vector<NodeId> stack{a};
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId c : g.children(v))
                if (!seen[c]) {
                    seen[c] = true;
                    stack.push_back(c);
                    pairs.emplace_back(a, c);
                }
        }
    }
    if (pairs.empty()) return {-1, -1};
    return pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
}

inline Edge distinct_pair(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    NodeId a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    return {a, b};
}

}  // namespace gen
