#include "adjustmcmc/delta.hpp"

#include <stdexcept>
#include <string>

namespace adjustmcmc {

namespace {

NodeSet collider_descendants_union(const AdjCache& cache) {
    NodeSet out;
    for (const auto& [c, de] : cache.collider_descendants) out = out | de;
    return out;
}

}  // namespace

bool is_insignificant(const AdjCache& cache, const Dag& g, NodeId z) {
    if (z == cache.x || z == cache.y) throw std::invalid_argument("is_insignificant: z is treatment or outcome");
    NodeSet de_clr = collider_descendants_union(cache);
    NodeSet core = cache.forb | de_clr;
    NodeSet all = cache.rch | core | parents_of(g, core);
    return !all.contains(z);
}

AlterationReport analyze_alteration(const Dag& before, const Dag& after, NodeId z,
                                    const AdjCache& cache_before, const AdjCache& cache_after) {
    if (before.n() != after.n() || skeleton_of(before) != skeleton_of(after))
        throw std::invalid_argument("analyze_alteration: graphs do not share a skeleton");
    for (auto [a, b] : before.edges())
        if (!after.has_edge(a, b) && a != z && b != z)
            throw std::invalid_argument("analyze_alteration: edge " + std::to_string(a) + "->" +
                                        std::to_string(b) + " changed but is not incident to node " +
                                        std::to_string(z));

    AlterationReport r;
    r.z = z;
    const NodeSet& rch = cache_before.rch;

    // Restricted graph on rch (and so clr) can only change through an edge inside rch.
    r.rch_unchanged = !rch.contains(z) ||
                      (cache_before.rch == cache_after.rch && cache_before.restricted == cache_after.restricted);

    NodeSet forb_guard = rch | cache_before.forb | parents_of(before, cache_before.forb);
    r.forb_symdiff = cache_before.forb ^ cache_after.forb;
    r.forb_unchanged = !forb_guard.contains(z) || r.forb_symdiff.empty();

    // Descendants of every collider present in either graph.
    NodeSet colliders = cache_before.clr | cache_after.clr;
    for (NodeId c : colliders) {
        NodeSet de_before = descendants_of(before, {c});
        NodeSet de_after = descendants_of(after, {c});
        NodeSet diff = de_before ^ de_after;
        if (!diff.empty()) r.collider_desc_symdiff.emplace(c, std::move(diff));
    }
    NodeSet de_clr = collider_descendants_union(cache_before);
    NodeSet clr_guard = rch | de_clr | parents_of(before, de_clr);
    r.collider_desc_unchanged = !clr_guard.contains(z) || r.collider_desc_symdiff.empty();
    return r;
}

std::optional<bool> transfer_validity(const AlterationReport& report, const NodeSet& a, bool was_valid) {
    if (report.rch_unchanged && report.forb_unchanged && report.collider_desc_unchanged) return was_valid;
    if (!report.rch_unchanged) return std::nullopt;
    if (a.intersects(report.forb_symdiff)) return std::nullopt;
    for (const auto& [c, diff] : report.collider_desc_symdiff)
        if (a.intersects(diff)) return std::nullopt;
    return was_valid;
}

}  // namespace adjustmcmc
