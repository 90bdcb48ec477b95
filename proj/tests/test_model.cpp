#include <doctest.h>

#include <cmath>
#include <random>

#include "adjustmcmc/model.hpp"
#include "fixtures.hpp"
#include "printers.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace adjustmcmc;
using fixtures::Triangle;

namespace {

Sem make_sem(int n, std::vector<std::tuple<NodeId, NodeId, double>> edges) {
    std::vector<Edge> e;
    Sem s;
    s.coeff = Eigen::MatrixXd::Zero(n, n);
    for (auto [a, b, w] : edges) {
        e.emplace_back(a, b);
        s.coeff(a, b) = w;
    }
    s.dag = Dag(n, e);
    s.noise_var = Eigen::VectorXd::Ones(n);
    return s;
}

double variance(const Eigen::VectorXd& v) { return (v.array() - v.mean()).square().sum() / (v.size() - 1); }

double covariance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return ((a.array() - a.mean()) * (b.array() - b.mean())).sum() / (a.size() - 1);
}

}  // namespace

TEST_CASE("random sem") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        Sem s = random_sem(2, 1.0, rng);
        REQUIRE(s.dag.num_edges() == 1);
        auto [a, b] = s.dag.edges().front();
        CHECK(std::abs(s.coefficient(a, b)) < 1.0);
        CHECK(s.noise_var(0) == 1.0);
    }
    double edges = 0;
    for (int i = 0; i < 1000; ++i) edges += static_cast<double>(random_sem(10, 3.0, rng).dag.num_edges());
    CHECK(edges / 1000 == doctest::Approx(15.0).epsilon(1.0 / 15.0));

    Rng r1(99), r2(99);
    Sem s1 = random_sem(8, 3.0, r1), s2 = random_sem(8, 3.0, r2);
    CHECK(s1.dag == s2.dag);
    CHECK(s1.coeff == s2.coeff);
}

TEST_CASE("simulation moments") {
    Rng rng(2);
    Dataset d = simulate(make_sem(2, {{0, 1, 1.0}}), 100000, rng);
    CHECK(variance(d.values.col(1)) == doctest::Approx(2.0).epsilon(0.03));

    Sem empty = make_sem(3, {});
    Dataset e = simulate(empty, 100000, rng);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double r = covariance(e.values.col(i), e.values.col(j)) /
                       std::sqrt(variance(e.values.col(i)) * variance(e.values.col(j)));
            CHECK(std::abs(r) < 0.02);
        }

    Dataset c = simulate(make_sem(3, {{0, 1, 0.5}, {1, 2, 0.5}}), 100000, rng);
    CHECK(covariance(c.values.col(0), c.values.col(2)) == doctest::Approx(0.25).epsilon(0.05));
    CHECK(c.names == std::vector<std::string>{"V0", "V1", "V2"});
}

TEST_CASE("total effect") {
    CHECK(total_effect(make_sem(2, {{0, 1, 0.7}}), 0, 1) == doctest::Approx(0.7));
    CHECK(total_effect(make_sem(3, {{0, 1, 0.3}, {1, 2, 0.5}, {0, 2, 0.2}}), 0, 2) == doctest::Approx(0.35));
    CHECK(total_effect(make_sem(3, {{1, 0, 0.3}, {1, 2, 0.5}}), 0, 2) == 0.0);
}

TEST_CASE("total effect matches the matrix inverse") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + i % 9;
        Sem s = random_sem(n, 3.0, rng);
        Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - s.coeff).inverse();
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = 0; b < n; ++b)
                if (a != b) CHECK(std::abs(total_effect(s, a, b) - inv(a, b)) < 1e-10);
    }
}

TEST_CASE("ols effect estimates") {
    Rng rng(4);
    Dataset d = simulate(make_sem(2, {{0, 1, 1.0}}), 100000, rng);
    CHECK(estimate_effect_ols(d, 0, 1, NodeSet{}) == doctest::Approx(1.0).epsilon(0.02));

    Sem f4 = Triangle::sem(0.8, 0.8, 0.5);
    Dataset t = simulate(f4, 200000, rng);
    CHECK(std::abs(estimate_effect_ols(t, Triangle::X, Triangle::Y, NodeSet{Triangle::C}) - 0.5) < 0.02);
    // omitted confounder: slope = cov(x,y)/var(x) = (0.5·1.64 + 0.64) / 1.64
    CHECK(std::abs(estimate_effect_ols(t, Triangle::X, Triangle::Y, NodeSet{}) - 1.46 / 1.64) < 0.02);
}

TEST_CASE("ols error shrinks with sample size") {
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        Rng rng(seed);
        Sem s = Triangle::sem(0.6, -0.4, 0.9);
        double small = 0, large = 0;
        for (int r = 0; r < 40; ++r) {
            small += std::pow(estimate_effect_ols(simulate(s, 100, rng), 0, 1, NodeSet{2}) - 0.9, 2);
            large += std::pow(estimate_effect_ols(simulate(s, 10000, rng), 0, 1, NodeSet{2}) - 0.9, 2);
        }
        CHECK(large < small / 10);
    }
}

TEST_CASE("singular regressions are errors") {
    Dataset d;
    d.values = Eigen::MatrixXd::Random(50, 3);
    d.values.col(2) = 2.0 * d.values.col(1);
    d.names = default_names(3);
    std::vector<NodeId> regs{1, 2};
    CHECK_THROWS_AS(residual_sum_of_squares(d, 0, regs), SingularRegression);
    d.values.col(0).setConstant(1.0);
    CHECK_THROWS_AS(local_bic(d, 0, {}), SingularRegression);
}

TEST_CASE("bic score") {
    Rng rng(8);
    Dataset d = simulate(make_sem(2, {{0, 1, 1.0}}), 10000, rng);
    const double n = d.rows();
    double closed = 0;
    for (int v = 0; v < 2; ++v) {
        double rss = (d.values.col(v).array() - d.values.col(v).mean()).square().sum();
        closed += -(n / 2) * (1 + std::log(2 * M_PI * rss / n)) - std::log(n);
    }
    CHECK(bic_score(d, Dag(2)) == doctest::Approx(closed).epsilon(1e-12));
    std::vector<Edge> e{{0, 1}};
    CHECK(bic_score(d, Dag(2, e)) > bic_score(d, Dag(2)));

    ScoreCache cache;
    Dag g(2, e);
    double first = bic_score(d, g, cache);
    CHECK(bic_score(d, g, cache) == first);
    CHECK(cache.hits() > 0);
    CHECK(bic_score(d, g) == first);
}

TEST_CASE("markov equivalent dags score equally") {
    std::mt19937_64 grng(9);
    Rng rng(10);
    for (int i = 0; i < 30; ++i) {
        const int n = 3 + i % 5;
        Dag g = gen::random_dag(grng, n, 0.5);
        if (g.num_edges() > 10) continue;
        Sem s = random_sem(n, 2.0, rng);
        Dataset d = simulate(s, 500, rng);
        const double ref = bic_score(d, g);
        for (const Dag& h : oracle::mec(g)) CHECK(std::abs(bic_score(d, h) - ref) <= 1e-6 * std::abs(ref));
    }
}

TEST_CASE("fisher z test") {
    Rng rng(11);
    int independent = 0;
    for (int r = 0; r < 300; ++r) {
        Dataset d = simulate(make_sem(2, {}), 200, rng);
        independent += fisher_z_independent(d, 0, 1, NodeSet{}, 0.01);
    }
    CHECK(independent >= 285);

    Dataset dep = simulate(make_sem(2, {{0, 1, 1.0}}), 1000, rng);
    CHECK_FALSE(fisher_z_independent(dep, 0, 1, NodeSet{}, 0.01));

    int chain_indep = 0;
    for (int r = 0; r < 100; ++r) {
        Dataset c = simulate(make_sem(3, {{0, 1, 0.8}, {1, 2, 0.8}}), 10000, rng);
        chain_indep += fisher_z_independent(c, 0, 2, NodeSet{1}, 0.01);
        if (r == 0) CHECK_FALSE(fisher_z_independent(c, 0, 2, NodeSet{}, 0.01));
    }
    CHECK(chain_indep >= 95);
}

TEST_CASE("dataset validation") {
    Dataset d;
    d.values = Eigen::MatrixXd::Zero(3, 2);
    d.names = {"a"};
    CHECK_THROWS(d.validate());
    d.names = {"a", "b"};
    CHECK_NOTHROW(d.validate());
    CHECK(d.column("b") == 1);
    CHECK_THROWS(d.column("c"));
    d.values(0, 0) = std::nan("");
    CHECK_THROWS(d.validate());
}

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}
