#pragma once

#include <map>
#include <optional>

#include "adjustmcmc/adjust.hpp"

namespace adjustmcmc {

/// What a single-node re-orientation did to the quantities that determine
/// adjustment validity. A flag is true when the quantity is provably (or
/// verifiably) identical in both graphs; the matching symdiff is then empty.
struct AlterationReport {
    NodeId z = 0;
    bool rch_unchanged = false;            ///< restricted graph on rch, hence clr
    bool forb_unchanged = false;
    bool collider_desc_unchanged = false;  ///< de(c) for every c in clr
    NodeSet forb_symdiff;
    std::map<NodeId, NodeSet> collider_desc_symdiff;
};

/// z ∉ rch ∪ forb ∪ de(clr) ∪ pa(forb ∪ de(clr)): moving z cannot change the
/// set of valid adjustment sets.
bool is_insignificant(const AdjCache& cache, const Dag& g, NodeId z);

/// Compares caches of `before` and `after`, which must share a skeleton and
/// differ only in the orientation of edges incident to `z`. Membership tests
/// on z decide each flag first; direct comparison is the fallback.
/// Throws std::invalid_argument on a skeleton mismatch or when a changed edge
/// is not incident to z.
AlterationReport analyze_alteration(const Dag& before, const Dag& after, NodeId z,
                                    const AdjCache& cache_before, const AdjCache& cache_after);

/// Validity of A in the altered graph when a lemma decides it, nullopt when A
/// must be rechecked.
std::optional<bool> transfer_validity(const AlterationReport& report, const NodeSet& a, bool was_valid);

}  // namespace adjustmcmc
