#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "adjustmcmc/graph.hpp"

namespace adjustmcmc {

using Rng = std::mt19937_64;

/// Independent stream seed for replicate `index` under tag `stream` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

/// Raised when a regression design is rank deficient or fits exactly.
class SingularRegression : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Observations in rows, variables in columns.
struct Dataset {
    Eigen::MatrixXd values;
    std::vector<std::string> names;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    /// Throws std::invalid_argument if empty, non-finite or names mismatch.
    void validate() const;
    /// Column index of `name`; throws std::out_of_range if absent.
    int column(const std::string& name) const;
    Dataset select_rows(std::span<const int> rows) const;
};

/// Default names "V0", "V1", ...
std::vector<std::string> default_names(int n);

/// Linear-Gaussian structural equation model.
struct Sem {
    Dag dag;
    Eigen::MatrixXd coeff;  ///< coeff(parent, child); zero off the edge set
    Eigen::VectorXd noise_var;

    int n() const { return dag.n(); }
    double coefficient(NodeId from, NodeId to) const { return coeff(from, to); }
    /// Throws std::invalid_argument if coefficients sit off the edge set or a
    /// noise variance is not strictly positive.
    void validate() const;
};

/// Erdős–Rényi skeleton with edge probability expected_degree / (n - 1),
/// oriented by a uniformly random ordering, Uniform(-1, 1) coefficients and
/// unit noise variances.
Sem random_sem(int n, double expected_degree, Rng& rng);

/// Random DAG with the same generator as random_sem, without parameters.
Dag random_dag(int n, double expected_degree, Rng& rng);

Dataset simulate(const Sem& sem, int rows, Rng& rng);

/// Sum over directed x ⇝ y paths of the coefficient products.
double total_effect(const Sem& sem, NodeId x, NodeId y);

/// OLS coefficient of x when regressing y on x, A and an intercept.
/// Throws SingularRegression on a rank-deficient design.
double estimate_effect_ols(const Dataset& data, NodeId x, NodeId y, const NodeSet& a);

/// Residual sum of squares of column `target` regressed on `regressors` and an intercept.
double residual_sum_of_squares(const Dataset& data, NodeId target, std::span<const NodeId> regressors);

/// Gaussian BIC of one family: -(N/2)(1 + log(2π RSS/N)) - ((|pa| + 2)/2) log N.
double local_bic(const Dataset& data, NodeId node, std::span<const NodeId> parents);

/// Memo of local scores keyed by (node, sorted parents). One cache per dataset.
class ScoreCache {
public:
    double local(const Dataset& data, NodeId node, std::span<const NodeId> parents);
    std::size_t size() const { return m_scores.size(); }
    std::size_t hits() const { return m_hits; }
    void clear() { m_scores.clear(); m_hits = 0; }

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<NodeId>& key) const noexcept;
    };
    std::unordered_map<std::vector<NodeId>, double, KeyHash> m_scores;
    std::size_t m_hits = 0;
};

/// Sum of local scores in node order.
double bic_score(const Dataset& data, const Dag& g, ScoreCache& cache);
double bic_score(const Dataset& data, const Dag& g);

/// Fisher-z tests of vanishing partial correlation against a precomputed
/// correlation matrix.
class FisherZTest {
public:
    explicit FisherZTest(const Dataset& data);

    /// Partial correlation of (i, j) given s. Throws std::domain_error on a
    /// singular correlation submatrix.
    double partial_correlation(NodeId i, NodeId j, const NodeSet& s) const;
    /// Two-sided p-value of the z statistic.
    double p_value(NodeId i, NodeId j, const NodeSet& s) const;
    /// True when the test fails to reject at level alpha.
    bool independent(NodeId i, NodeId j, const NodeSet& s, double alpha) const {
        return p_value(i, j, s) > alpha;
    }

private:
    Eigen::MatrixXd m_corr;
    int m_rows;
};

bool fisher_z_independent(const Dataset& data, NodeId i, NodeId j, const NodeSet& s, double alpha);

}  // namespace adjustmcmc
