#pragma once

#include <map>
#include <vector>

#include "adjustmcmc/graph.hpp"

namespace adjustmcmc {

/// Nodes other than x on some directed path x → … → y (contains y when such a
/// path exists; empty otherwise).
NodeSet causal_nodes(const Dag& g, NodeId x, NodeId y);

/// de(causal_nodes) ∪ {x}. No valid adjustment set may touch it.
NodeSet forbidden_set(const Dag& g, NodeId x, NodeId y);

struct ReachInfo {
    NodeSet rch;     ///< nodes on some simple x–y path of the skeleton
    NodeSet clr;     ///< colliders on some simple x–y path
    Dag restricted;  ///< g induced on rch (ids preserved)
};

/// Uses the biconnected block of the skeleton (augmented with x–y) for rch, and
/// a two-disjoint-paths flow check per (collider, parent pair) for clr.
ReachInfo reachable_and_colliders(const Dag& g, NodeId x, NodeId y);

/// g without x → c for every child c of x that is an ancestor of y.
Dag proper_backdoor_graph(const Dag& g, NodeId x, NodeId y);

/// pa(cn) \ forb.
NodeSet optimal_adjustment_set(const Dag& g, NodeId x, NodeId y);

/// Per-(graph, x, y) quantities shared by every validity test on that graph.
struct AdjCache {
    NodeId x = 0;
    NodeId y = 0;
    NodeSet causal;
    NodeSet forb;
    NodeSet rch;
    NodeSet clr;
    std::map<NodeId, NodeSet> collider_descendants;
    Dag restricted;
    Dag backdoor;
    NodeSet optimal;
};

AdjCache build_adj_cache(const Dag& g, NodeId x, NodeId y);

/// A ∩ forb = ∅ and x ⊥ y | A in the proper back-door graph.
bool is_valid_adjustment(const AdjCache& cache, const NodeSet& a);
bool is_valid_adjustment(const Dag& g, NodeId x, NodeId y, const NodeSet& a);

inline constexpr int kDefaultEnumerationBound = 14;

/// Exhaustive filter over all subsets of V \ {x, y}, sorted canonically.
/// Throws std::length_error when g has more than `max_nodes` nodes.
std::vector<NodeSet> enumerate_all_valid(const Dag& g, NodeId x, NodeId y,
                                         int max_nodes = kDefaultEnumerationBound);

/// Subsets S of `optimal` with |S| ≥ |optimal| - depth, largest first, then
/// canonical order within a size.
std::vector<NodeSet> near_optimal_candidates(const NodeSet& optimal, int depth);

/// The valid members of near_optimal_candidates(opadj, depth).
std::vector<NodeSet> enumerate_near_optimal(const AdjCache& cache, int depth);
std::vector<NodeSet> enumerate_near_optimal(const Dag& g, NodeId x, NodeId y, int depth = 1);

/// Starts from de(A) ∩ opadj and adds opadj members in ascending id until the
/// set is valid. Throws std::invalid_argument if A itself is not valid.
NodeSet improve_toward_optimal(const Dag& g, NodeId x, NodeId y, const NodeSet& a);

/// A minus the nodes placed after y in `order`. Throws std::invalid_argument
/// if A is not valid in g or `order` is not a topological order of g with x
/// before y.
NodeSet prune_after_y(const Dag& g, NodeId x, NodeId y, const TopologicalOrder& order,
                      const NodeSet& a);

/// False iff some possibly directed x ⇝ y path leaves x through an undirected edge.
bool is_amenable(const Cpdag& c, NodeId x, NodeId y);

}  // namespace adjustmcmc
