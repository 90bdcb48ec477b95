#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace adjustmcmc {

using NodeId = int;

/// Sorted, duplicate-free set of node indices. Lexicographic order on the
/// sorted members is the canonical order used for tally keys and listings.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids) : m_ids(ids) { normalize(); }
    explicit NodeSet(std::vector<NodeId> ids) : m_ids(std::move(ids)) { normalize(); }

    /// Members i with mask[i] != 0.
    template <typename Mask>
    static NodeSet from_mask(const Mask& mask) {
        NodeSet s;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) s.m_ids.push_back(static_cast<NodeId>(i));
        return s;
    }

    /// Members i with bit i set.
    static NodeSet from_bits(unsigned long long bits) {
        NodeSet s;
        for (int i = 0; bits; ++i, bits >>= 1)
            if (bits & 1u) s.m_ids.push_back(i);
        return s;
    }

    std::vector<char> to_mask(int n) const {
        std::vector<char> mask(static_cast<std::size_t>(n), 0);
        for (NodeId v : m_ids) mask[static_cast<std::size_t>(v)] = 1;
        return mask;
    }

    bool contains(NodeId v) const { return std::binary_search(m_ids.begin(), m_ids.end(), v); }
    void insert(NodeId v) {
        auto it = std::lower_bound(m_ids.begin(), m_ids.end(), v);
        if (it == m_ids.end() || *it != v) m_ids.insert(it, v);
    }
    void erase(NodeId v) {
        auto it = std::lower_bound(m_ids.begin(), m_ids.end(), v);
        if (it != m_ids.end() && *it == v) m_ids.erase(it);
    }

    std::size_t size() const { return m_ids.size(); }
    bool empty() const { return m_ids.empty(); }
    auto begin() const { return m_ids.begin(); }
    auto end() const { return m_ids.end(); }
    const std::vector<NodeId>& ids() const { return m_ids; }

    bool intersects(const NodeSet& other) const;
    bool is_subset_of(const NodeSet& other) const {
        return std::includes(other.m_ids.begin(), other.m_ids.end(), m_ids.begin(), m_ids.end());
    }

    friend NodeSet operator|(const NodeSet& a, const NodeSet& b);
    friend NodeSet operator&(const NodeSet& a, const NodeSet& b);
    friend NodeSet operator-(const NodeSet& a, const NodeSet& b);
    /// Symmetric difference.
    friend NodeSet operator^(const NodeSet& a, const NodeSet& b);

    friend bool operator==(const NodeSet&, const NodeSet&) = default;
    friend auto operator<=>(const NodeSet& a, const NodeSet& b) { return a.m_ids <=> b.m_ids; }

    /// "{1,3,7}"
    std::string to_string() const;

private:
    void normalize() {
        std::sort(m_ids.begin(), m_ids.end());
        m_ids.erase(std::unique(m_ids.begin(), m_ids.end()), m_ids.end());
    }

    std::vector<NodeId> m_ids;
};

struct NodeSetHash {
    std::size_t operator()(const NodeSet& s) const noexcept;
};

}  // namespace adjustmcmc
