#include "adjustmcmc/node_set.hpp"

#include <iterator>

namespace adjustmcmc {

bool NodeSet::intersects(const NodeSet& other) const {
    auto a = m_ids.begin();
    auto b = other.m_ids.begin();
    while (a != m_ids.end() && b != other.m_ids.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a;
        else ++b;
    }
    return false;
}

NodeSet operator|(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.m_ids));
    return out;
}

NodeSet operator&(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.m_ids));
    return out;
}

NodeSet operator-(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.m_ids));
    return out;
}

NodeSet operator^(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out.m_ids));
    return out;
}

std::string NodeSet::to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < m_ids.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(m_ids[i]);
    }
    return s + "}";
}

std::size_t NodeSetHash::operator()(const NodeSet& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (NodeId v : s) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace adjustmcmc
