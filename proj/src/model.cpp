#include "adjustmcmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace adjustmcmc {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ stream) ^ index);
}

void Dataset::validate() const {
    if (values.rows() < 1 || values.cols() < 1) throw std::invalid_argument("dataset is empty");
    if (!values.allFinite()) throw std::invalid_argument("dataset contains non-finite values");
    if (!names.empty() && static_cast<int>(names.size()) != cols())
        throw std::invalid_argument("dataset has " + std::to_string(cols()) + " columns but " +
                                    std::to_string(names.size()) + " names");
}

int Dataset::column(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no column named '" + name + "'");
    return static_cast<int>(it - names.begin());
}

Dataset Dataset::select_rows(std::span<const int> rows) const {
    Dataset out;
    out.names = names;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.values.row(static_cast<Eigen::Index>(i)) = values.row(rows[i]);
    return out;
}

std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
    return names;
}

void Sem::validate() const {
    const int k = dag.n();
    if (coeff.rows() != k || coeff.cols() != k || noise_var.size() != k)
        throw std::invalid_argument("SEM parameter dimensions do not match the graph");
    for (NodeId a = 0; a < k; ++a)
        for (NodeId b = 0; b < k; ++b)
            if (coeff(a, b) != 0.0 && !dag.has_edge(a, b))
                throw std::invalid_argument("coefficient on non-edge " + std::to_string(a) + "->" + std::to_string(b));
    for (int v = 0; v < k; ++v)
        if (!(noise_var[v] > 0.0)) throw std::invalid_argument("noise variance must be positive");
}

Dag random_dag(int n, double expected_degree, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random graphs need at least two nodes");
    const double p = std::min(1.0, expected_degree / (n - 1));
    std::vector<NodeId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
    return Dag(n, edges);
}

Sem random_sem(int n, double expected_degree, Rng& rng) {
    Sem sem;
    sem.dag = random_dag(n, expected_degree, rng);
    sem.coeff = Eigen::MatrixXd::Zero(n, n);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto [a, b] : sem.dag.edges()) sem.coeff(a, b) = unif(rng);
    sem.noise_var = Eigen::VectorXd::Ones(n);
    return sem;
}

Dataset simulate(const Sem& sem, int rows, Rng& rng) {
    if (rows < 1) throw std::invalid_argument("simulate: need at least one row");
    const int n = sem.n();
    Dataset data;
    data.values = Eigen::MatrixXd::Zero(rows, n);
    data.names = default_names(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto order = topological_order(sem.dag);
    for (NodeId v : order.perm()) {
        auto col = data.values.col(v);
        for (NodeId p : sem.dag.parents(v)) col += sem.coeff(p, v) * data.values.col(p);
        const double sd = std::sqrt(sem.noise_var[v]);
        for (int i = 0; i < rows; ++i) col[i] += sd * normal(rng);
    }
    return data;
}

double total_effect(const Sem& sem, NodeId x, NodeId y) {
    std::vector<double> effect(static_cast<std::size_t>(sem.n()), 0.0);
    effect[x] = 1.0;
    const auto order = topological_order(sem.dag);
    for (int i = order.position(x) + 1; i < sem.n(); ++i) {
        NodeId v = order[i];
        for (NodeId p : sem.dag.parents(v)) effect[v] += effect[p] * sem.coeff(p, v);
    }
    return x == y ? 1.0 : effect[y];
}

namespace {

struct OlsFit {
    Eigen::VectorXd beta;
    double rss;
};

// Regress data column `target` on [1, regressors...].
OlsFit ols(const Dataset& data, NodeId target, std::span<const NodeId> regressors) {
    const Eigen::Index rows = data.values.rows();
    const Eigen::Index k = static_cast<Eigen::Index>(regressors.size()) + 1;
    if (rows <= k)
        throw SingularRegression("regression needs more rows (" + std::to_string(rows) + ") than coefficients (" +
                                 std::to_string(k) + ")");
    Eigen::MatrixXd design(rows, k);
    design.col(0).setOnes();
    for (Eigen::Index j = 1; j < k; ++j) design.col(j) = data.values.col(regressors[static_cast<std::size_t>(j - 1)]);
    const Eigen::VectorXd response = data.values.col(target);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k) throw SingularRegression("collinear regressors for column " + std::to_string(target));
    OlsFit fit;
    fit.beta = qr.solve(response);
    fit.rss = (response - design * fit.beta).squaredNorm();
    return fit;
}

}  // namespace

double residual_sum_of_squares(const Dataset& data, NodeId target, std::span<const NodeId> regressors) {
    return ols(data, target, regressors).rss;
}

double estimate_effect_ols(const Dataset& data, NodeId x, NodeId y, const NodeSet& a) {
    if (a.contains(x) || a.contains(y)) throw std::invalid_argument("adjustment set contains treatment or outcome");
    std::vector<NodeId> regressors{x};
    regressors.insert(regressors.end(), a.begin(), a.end());
    return ols(data, y, regressors).beta[1];
}

double local_bic(const Dataset& data, NodeId node, std::span<const NodeId> parents) {
    const double rows = data.rows();
    const double rss = residual_sum_of_squares(data, node, parents);
    if (!(rss > 0.0)) throw SingularRegression("exact fit for column " + std::to_string(node));
    const double params = static_cast<double>(parents.size()) + 2.0;
    return -0.5 * rows * (1.0 + std::log(2.0 * std::numbers::pi * rss / rows)) - 0.5 * params * std::log(rows);
}

std::size_t ScoreCache::KeyHash::operator()(const std::vector<NodeId>& key) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (NodeId v : key) h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ULL;
    return h;
}

double ScoreCache::local(const Dataset& data, NodeId node, std::span<const NodeId> parents) {
    std::vector<NodeId> key;
    key.reserve(parents.size() + 1);
    key.push_back(node);
    key.insert(key.end(), parents.begin(), parents.end());
    auto it = m_scores.find(key);
    if (it != m_scores.end()) {
        ++m_hits;
        return it->second;
    }
    const double s = local_bic(data, node, parents);
    m_scores.emplace(std::move(key), s);
    return s;
}

double bic_score(const Dataset& data, const Dag& g, ScoreCache& cache) {
    if (data.cols() != g.n()) throw std::invalid_argument("bic_score: dataset width does not match graph");
    double total = 0.0;
    for (NodeId v = 0; v < g.n(); ++v) total += cache.local(data, v, g.parents(v));
    return total;
}

double bic_score(const Dataset& data, const Dag& g) {
    ScoreCache cache;
    return bic_score(data, g, cache);
}

FisherZTest::FisherZTest(const Dataset& data) : m_rows(data.rows()) {
    if (data.rows() < 2) throw std::invalid_argument("FisherZTest: need at least two rows");
    Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.rows() - 1);
    Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < sd.size(); ++i)
        if (!(sd[i] > 0.0)) throw std::domain_error("FisherZTest: column " + std::to_string(i) + " is constant");
    m_corr = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
}

double FisherZTest::partial_correlation(NodeId i, NodeId j, const NodeSet& s) const {
    std::vector<NodeId> idx{i, j};
    idx.insert(idx.end(), s.begin(), s.end());
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = m_corr(idx[a], idx[b]);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-12)
        throw std::domain_error("FisherZTest: singular correlation submatrix");
    Eigen::MatrixXd prec = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    return -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
}

double FisherZTest::p_value(NodeId i, NodeId j, const NodeSet& s) const {
    const int dof = m_rows - static_cast<int>(s.size()) - 3;
    if (dof <= 0) throw std::invalid_argument("FisherZTest: too few rows for conditioning set");
    double r = partial_correlation(i, j, s);
    r = std::clamp(r, -1.0 + 1e-15, 1.0 - 1e-15);
    const double z = 0.5 * std::log((1.0 + r) / (1.0 - r)) * std::sqrt(static_cast<double>(dof));
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

bool fisher_z_independent(const Dataset& data, NodeId i, NodeId j, const NodeSet& s, double alpha) {
    return FisherZTest(data).independent(i, j, s, alpha);
}

}  // namespace adjustmcmc
