#include <doctest.h>

#include <random>

#include "adjustmcmc/graph.hpp"
#include "fixtures.hpp"
#include "printers.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace adjustmcmc;
using fixtures::TenNode;

TEST_CASE("node sets are canonical") {
    NodeSet a{3, 1, 3, 2};
    CHECK(a.ids() == std::vector<NodeId>{1, 2, 3});
    CHECK(a.to_string() == "{1,2,3}");
    CHECK((a | NodeSet{5}) == NodeSet{1, 2, 3, 5});
    CHECK((a & NodeSet{2, 9}) == NodeSet{2});
    CHECK((a - NodeSet{1}) == NodeSet{2, 3});
    CHECK((a ^ NodeSet{3, 4}) == NodeSet{1, 2, 4});
    CHECK(NodeSet{} < NodeSet{0});
    CHECK(NodeSet{0, 5} < NodeSet{1});
    CHECK(NodeSet::from_bits(0b1010) == NodeSet{1, 3});
}

TEST_CASE("dag construction rejects cycles and duplicates") {
    std::vector<Edge> cyc{{0, 1}, {1, 2}, {2, 0}};
    CHECK_THROWS_AS(Dag(3, cyc), std::invalid_argument);
    std::vector<Edge> dup{{0, 1}, {0, 1}};
    CHECK_THROWS_AS(Dag(2, dup), std::invalid_argument);
    std::vector<Edge> anti{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Dag(2, anti), std::invalid_argument);
    std::vector<Edge> self{{1, 1}};
    CHECK_THROWS(Dag(2, self));
}

TEST_CASE("relatives") {
    Dag g = TenNode::dag();
    CHECK(descendants_of(g, NodeSet{2}) == NodeSet{2, 4, TenNode::Y});
    CHECK(ancestors_of(g, NodeSet{}).empty());
    std::vector<Edge> chain{{0, 1}, {1, 2}};
    CHECK(ancestors_of(Dag(3, chain), NodeSet{2}) == NodeSet{0, 1, 2});
    CHECK(parents_of(g, NodeSet{1, 6}) == NodeSet{0, 3, 5, 7});
}

TEST_CASE("orient") {
    std::vector<Edge> one{{0, 1}};
    CHECK(orient(Skeleton(2, one), TopologicalOrder({0, 1})).has_edge(0, 1));

    Dag g = TenNode::dag();
    TopologicalOrder order({8, 5, 7, 3, TenNode::T, 6, 1, 2, 4, TenNode::Y});
    CHECK(orient(skeleton_of(g), order) == g);

    // triangle with order (x, 1, y)
    std::vector<Edge> tri{{0, 2}, {2, 1}, {0, 1}};
    Dag d = orient(Skeleton(3, tri), TopologicalOrder({0, 2, 1}));
    CHECK(d.has_edge(0, 2));
    CHECK(d.has_edge(2, 1));
    CHECK(d.has_edge(0, 1));
}

TEST_CASE("orient round trip on random dags") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Dag g = gen::random_dag(rng, 2 + i % 9, 0.4);
        auto order = topological_order(g);
        CHECK(is_topological_order(g, order));
        CHECK(orient(skeleton_of(g), order) == g);
    }
}

TEST_CASE("topological order moves") {
    TopologicalOrder o({0, 1, 2, 3, 4});
    CHECK(o.moved(1, 3).perm() == std::vector<NodeId>{0, 2, 3, 1, 4});
    CHECK(o.moved(4, 0).perm() == std::vector<NodeId>{4, 0, 1, 2, 3});
    CHECK(o.moved(2, 2) == o);
    CHECK_THROWS(TopologicalOrder({0, 0, 1}));
}

TEST_CASE("d-separation examples") {
    std::vector<Edge> chain{{0, 1}, {1, 2}};
    CHECK(d_separated(Dag(3, chain), 0, 2, NodeSet{1}));
    CHECK_FALSE(d_separated(Dag(3, chain), 0, 2, NodeSet{}));
    std::vector<Edge> coll{{0, 1}, {2, 1}};
    CHECK_FALSE(d_separated(Dag(3, coll), 0, 2, NodeSet{1}));
    CHECK(d_separated(Dag(3, coll), 0, 2, NodeSet{}));

    Dag g = TenNode::dag();
    std::vector<Edge> cut{{TenNode::T, 1}};
    CHECK(d_separated(g.without_edges(cut), TenNode::T, TenNode::Y, NodeSet{5, 7}));
    CHECK_THROWS(d_separated(g, 0, 0, NodeSet{}));
    CHECK_THROWS(d_separated(g, 0, 1, NodeSet{1}));
}

TEST_CASE("d-separation agrees with path enumeration") {
    std::mt19937_64 rng(12);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        const int n = 3 + i % 6;
        Dag g = gen::random_dag(rng, n, 0.45);
        auto [a, b] = gen::distinct_pair(rng, n);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (mask & ((1u << a) | (1u << b))) continue;
            NodeSet z = NodeSet::from_bits(mask);
            REQUIRE(d_separated(g, a, b, z) == oracle::d_separated(g, a, b, z));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("cpdag examples") {
    std::vector<Edge> coll{{0, 1}, {2, 1}};
    Cpdag c = cpdag_of(Dag(3, coll));
    CHECK(c.has_directed(0, 1));
    CHECK(c.has_directed(2, 1));
    CHECK(c.undirected_edges().empty());

    std::vector<Edge> chain{{0, 1}, {1, 2}};
    Cpdag ch = cpdag_of(Dag(3, chain));
    CHECK(ch.directed_edges().empty());
    CHECK(ch.has_undirected(0, 1));
    CHECK(ch.has_undirected(2, 1));

    Cpdag tri = cpdag_of(fixtures::Triangle::dag());
    CHECK(tri.directed_edges().empty());
    CHECK(tri.undirected_edges().size() == 3);
}

TEST_CASE("cpdag matches enumerated equivalence class") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 120; ++i) {
        Dag g = gen::random_dag(rng, 3 + i % 5, 0.5);
        if (g.num_edges() > 10) continue;
        auto [dir, und] = oracle::cpdag_edges(g);
        Cpdag c = cpdag_of(g);
        CHECK(std::set<Edge>(c.directed_edges().begin(), c.directed_edges().end()) == dir);
        std::set<Edge> got_und;
        for (auto [a, b] : c.undirected_edges()) got_und.emplace(std::min(a, b), std::max(a, b));
        CHECK(got_und == und);
        for (const Dag& h : oracle::mec(g)) CHECK(cpdag_of(h) == c);
    }
}

TEST_CASE("shd convention") {
    Dag g = TenNode::dag();
    CHECK(shd(g, g) == 0);
    std::vector<Edge> fwd{{0, 1}}, back{{1, 0}};
    CHECK(shd(Dag(2, fwd), Dag(2, back)) == 2);
    CHECK(shd(Dag(2, fwd), Dag(2)) == 2);
}

TEST_CASE("shd is a metric") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + i % 7;
        Dag a = gen::random_dag(rng, n, 0.4), b = gen::random_dag(rng, n, 0.4), c = gen::random_dag(rng, n, 0.4);
        CHECK(shd(a, b) == shd(b, a));
        CHECK((shd(a, b) == 0) == (a == b));
        CHECK(shd(a, c) <= shd(a, b) + shd(b, c));
    }
}
