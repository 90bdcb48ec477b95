#pragma once

#include "adjustmcmc/graph.hpp"
#include "adjustmcmc/model.hpp"

namespace adjustmcmc {

struct SkeletonConfig {
    double alpha = 0.01;
    int max_cond_size = 3;

    void validate() const;
};

/// PC-stable adjacency search with Fisher-z tests: an edge is dropped when
/// some subset (size ≤ max_cond_size) of either endpoint's adjacencies at the
/// start of the level separates the pair. Removals are applied per level, so
/// the result does not depend on the variable order.
Skeleton estimate_skeleton(const Dataset& data, const SkeletonConfig& cfg = {});

/// Parents of `v` when `skeleton` is oriented by `order`.
std::vector<NodeId> parents_under(const Skeleton& skeleton, const TopologicalOrder& order, NodeId v);

/// Uniformly random ordering, conditioned on x preceding y.
TopologicalOrder random_order(int n, NodeId x, NodeId y, Rng& rng);

struct OrderSearchResult {
    TopologicalOrder order;
    Dag dag;
    double score = 0.0;
};

/// Greedy hill climb over orderings: for each node in turn, move it to the
/// position with the best BIC when that strictly improves the score; repeat
/// until a full sweep makes no move. Starts from random_order(x before y);
/// with restarts > 1 the best of that many independent climbs is kept.
OrderSearchResult greedy_order_search(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y,
                                      Rng& rng, ScoreCache& cache, int restarts = 1);

/// orient(skeleton, greedy_order_search(...).order)
Dag initial_dag(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y, Rng& rng, int restarts = 1);

}  // namespace adjustmcmc
