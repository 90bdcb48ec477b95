#include <doctest.h>

#include "adjustmcmc/skeleton.hpp"
#include "fixtures.hpp"
#include "printers.hpp"

using namespace adjustmcmc;

namespace {

Sem chain_sem(int n, double w) {
    Sem s;
    std::vector<Edge> e;
    s.coeff = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        e.emplace_back(i, i + 1);
        s.coeff(i, i + 1) = w;
    }
    s.dag = Dag(n, e);
    s.noise_var = Eigen::VectorXd::Ones(n);
    return s;
}

}  // namespace

TEST_CASE("skeleton of simple structures") {
    Rng rng(1);
    Dataset two = simulate(chain_sem(2, 1.0), 5000, rng);
    std::vector<Edge> xy{{0, 1}};
    CHECK(estimate_skeleton(two) == Skeleton(2, xy));

    Dataset chain = simulate(chain_sem(3, 0.8), 10000, rng);
    std::vector<Edge> ch{{0, 1}, {1, 2}};
    CHECK(estimate_skeleton(chain) == Skeleton(3, ch));

    Sem empty = chain_sem(4, 0.0);
    empty.dag = Dag(4);
    int empty_hits = 0;
    for (int r = 0; r < 100; ++r) empty_hits += estimate_skeleton(simulate(empty, 300, rng)).num_edges() == 0;
    CHECK(empty_hits >= 85);  // expected about 0.99^6
}

TEST_CASE("skeleton estimation is invariant to column order") {
    Rng rng(2);
    for (int r = 0; r < 10; ++r) {
        Sem s = random_sem(7, 3.0, rng);
        Dataset d = simulate(s, 300, rng);
        std::vector<int> perm{6, 2, 4, 0, 5, 1, 3};
        Dataset p;
        p.values.resize(d.rows(), d.cols());
        for (int c = 0; c < d.cols(); ++c) p.values.col(c) = d.values.col(perm[c]);
        p.names = default_names(d.cols());
        Skeleton a = estimate_skeleton(d), b = estimate_skeleton(p);
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j) CHECK(b.adjacent(i, j) == a.adjacent(perm[i], perm[j]));
    }
}

TEST_CASE("skeleton config validation") {
    CHECK_THROWS(SkeletonConfig{0.0, 3}.validate());
    CHECK_THROWS(SkeletonConfig{0.05, -1}.validate());
    CHECK_NOTHROW(SkeletonConfig{0.05, 0}.validate());
}

TEST_CASE("initial dag on a single edge") {
    Rng rng(3);
    Dataset d = simulate(chain_sem(2, 1.0), 200, rng);
    std::vector<Edge> xy{{0, 1}};
    Dag g = initial_dag(d, Skeleton(2, xy), 0, 1, rng);
    CHECK(g.has_edge(0, 1));
}

TEST_CASE("initial dag properties") {
    Rng rng(4);
    for (int r = 0; r < 20; ++r) {
        Sem s = random_sem(7, 3.0, rng);
        Dataset d = simulate(s, 200, rng);
        Skeleton skel = skeleton_of(s.dag);
        NodeId x = 0, y = 6;
        ScoreCache cache;
        Rng a(r), b(r);
        OrderSearchResult res = greedy_order_search(d, skel, x, y, a, cache);
        CHECK(res.order.precedes(x, y));
        CHECK(res.dag == orient(skel, res.order));
        CHECK(skeleton_of(res.dag) == skel);
        CHECK(res.score == doctest::Approx(bic_score(d, res.dag)));
        CHECK(initial_dag(d, skel, x, y, b) == res.dag);

        Rng c(1000 + r);
        Dag random = orient(skel, random_order(7, x, y, c));
        CHECK(bic_score(d, res.dag) >= bic_score(d, random) - 1e-9);
    }
}

TEST_CASE("initial dag recovers the class at large sample size") {
    Rng rng(5);
    int hits = 0;
    for (int r = 0; r < 50; ++r) {
        Sem s = random_sem(6, 2.5, rng);
        Dataset d = simulate(s, 100000, rng);
        // x must precede y in some member of the true class; use a topological pair
        auto order = topological_order(s.dag);
        Dag g = initial_dag(d, skeleton_of(s.dag), order[0], order[5], rng);
        hits += cpdag_of(g) == cpdag_of(s.dag);
    }
    MESSAGE("class recovered in " << hits << " of 50");
    CHECK(hits >= 40);
}

TEST_CASE("random order keeps treatment first") {
    Rng rng(6);
    for (int r = 0; r < 100; ++r) CHECK(random_order(5, 3, 1, rng).precedes(3, 1));
    std::vector<Edge> e{{0, 1}, {1, 2}};
    CHECK(parents_under(Skeleton(3, e), TopologicalOrder({2, 1, 0}), 1) == std::vector<NodeId>{2});
}
