#include "adjustmcmc/sampler.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "adjustmcmc/parallel.hpp"

namespace adjustmcmc {

TallyMode parse_tally_mode(const std::string& s) {
    if (s == "paper") return TallyMode::paper;
    if (s == "on-accept" || s == "on_accept") return TallyMode::on_accept;
    throw std::invalid_argument("unknown tally mode '" + s + "' (expected paper or on-accept)");
}

std::string to_string(TallyMode mode) { return mode == TallyMode::paper ? "paper" : "on-accept"; }

void SamplerConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    if (!(accept_scale > 0.0)) throw std::invalid_argument("accept_scale must be positive");
    if (burnin < 0) throw std::invalid_argument("burnin must be non-negative");
    if (init_restarts < 1) throw std::invalid_argument("init_restarts must be positive");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) throw std::invalid_argument("thresholds must lie in [0, 1]");
        if (i > 0 && thresholds[i] > thresholds[i - 1]) throw std::invalid_argument("thresholds must be sorted descending");
    }
}

std::optional<double> Tally::rate(const NodeSet& a) const {
    auto t = tested_count.find(a);
    if (t == tested_count.end() || t->second == 0) return std::nullopt;
    auto v = valid_count.find(a);
    const long long valid = v == valid_count.end() ? 0 : v->second;
    return static_cast<double>(valid) / static_cast<double>(t->second);
}

double Tally::iteration_frequency(const NodeSet& a) const {
    if (iterations == 0) return 0.0;
    auto v = valid_count.find(a);
    return v == valid_count.end() ? 0.0 : static_cast<double>(v->second) / static_cast<double>(iterations);
}

void Tally::merge(const Tally& other) {
    for (const auto& [s, c] : other.valid_count) valid_count[s] += c;
    for (const auto& [s, c] : other.tested_count) tested_count[s] += c;
    iterations += other.iterations;
}

std::vector<ThresholdList> threshold_lists(const Tally& tally, const std::vector<double>& thresholds) {
    if (tally.empty()) throw std::invalid_argument("threshold_lists: tally is empty");
    std::vector<std::pair<double, NodeSet>> rated;
    double best = 0.0;
    for (const auto& [set, tested] : tally.tested_count) {
        double r = tally.rate(set).value_or(0.0);
        if (r <= 0.0) continue;
        best = std::max(best, r);
        rated.emplace_back(r, set);
    }
    std::sort(rated.begin(), rated.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<ThresholdList> out;
    for (double s : thresholds) {
        ThresholdList list{s, {}};
        for (const auto& [r, set] : rated)
            if (r >= s * best) list.sets.push_back(set);
        out.push_back(std::move(list));
    }
    return out;
}

Proposal propose_order(const TopologicalOrder& order, Rng& rng, NodeId x, NodeId y) {
    const int n = order.n();
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (true) {
        const NodeId node = pick(rng);
        const int pos = pick(rng);
        TopologicalOrder next = order.moved(node, pos);
        if (next.precedes(x, y)) return {std::move(next), node};
    }
}

// --- Chain ------------------------------------------------------------------

Chain::Chain(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y, SamplerConfig cfg,
             TopologicalOrder start)
    : m_data(data), m_skeleton(skeleton), m_x(x), m_y(y), m_cfg(std::move(cfg)) {
    m_cfg.validate();
    if (data.cols() != skeleton.n()) throw std::invalid_argument("skeleton size does not match dataset width");
    if (start.n() != skeleton.n()) throw std::invalid_argument("start ordering does not cover the skeleton");
    if (!start.precedes(x, y)) throw std::invalid_argument("start ordering must place treatment before outcome");

    m_state.order = std::move(start);
    m_state.dag = orient(m_skeleton, m_state.order);
    m_state.local_scores.resize(static_cast<std::size_t>(skeleton.n()));
    for (NodeId v = 0; v < skeleton.n(); ++v)
        m_state.local_scores[v] = m_scores.local(m_data, v, m_state.dag.parents(v));
    m_state.score = std::accumulate(m_state.local_scores.begin(), m_state.local_scores.end(), 0.0);
    m_state.cache = build_adj_cache(m_state.dag, x, y);
    for (auto& s : near_optimal_candidates(m_state.cache.optimal, m_cfg.depth)) {
        bool valid = is_valid_adjustment(m_state.cache, s);
        if (valid) m_state.current_valid.push_back(s);
        m_state.examined.emplace_back(std::move(s), valid);
    }
}

void Chain::add_current(Tally& tally, bool tested, bool valid) const {
    if (tested)
        for (const auto& [s, v] : m_state.examined) ++tally.tested_count[s];
    if (valid)
        for (const auto& s : m_state.current_valid) ++tally.valid_count[s];
}

void Chain::open_tally(Tally& tally) const {
    add_current(tally, true, m_cfg.tally_mode == TallyMode::on_accept);
}

StepInfo Chain::step(Rng& rng, Tally* tally) {
    StepInfo info;
    Proposal prop = propose_order(m_state.order, rng, m_x, m_y);
    info.moved = prop.moved;

    // Only the moved node and its neighbours can change parent sets.
    std::vector<double> local = m_state.local_scores;
    local[prop.moved] = m_scores.local(m_data, prop.moved, parents_under(m_skeleton, prop.order, prop.moved));
    for (NodeId w : m_skeleton.neighbors(prop.moved))
        local[w] = m_scores.local(m_data, w, parents_under(m_skeleton, prop.order, w));
    const double new_score = std::accumulate(local.begin(), local.end(), 0.0);

    info.log_ratio = new_score - m_state.score;
    const double p = std::min(1.0, m_cfg.accept_scale * std::exp(info.log_ratio));
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    info.accepted = u < p;

    if (info.accepted) {
        Dag previous = std::move(m_state.dag);
        AdjCache previous_cache = std::move(m_state.cache);
        auto previous_examined = std::move(m_state.examined);

        m_state.order = std::move(prop.order);
        m_state.dag = orient(m_skeleton, m_state.order);
        m_state.local_scores = std::move(local);
        m_state.score = new_score;
        m_state.cache = build_adj_cache(m_state.dag, m_x, m_y);
        refresh_valid_list(previous, previous_cache, info.moved, previous_examined, info);
        if (tally) add_current(*tally, true, m_cfg.tally_mode == TallyMode::on_accept);
    }
    if (tally) {
        if (m_cfg.tally_mode == TallyMode::paper) add_current(*tally, false, true);
        ++tally->iterations;
    }
    if (m_cfg.verify) check_state();
    return info;
}

void Chain::refresh_valid_list(const Dag& previous, const AdjCache& previous_cache, NodeId moved,
                               const std::vector<std::pair<NodeSet, bool>>& previous_examined, StepInfo& info) {
    const AlterationReport report =
        analyze_alteration(previous, m_state.dag, moved, previous_cache, m_state.cache);
    std::map<NodeSet, bool> known(previous_examined.begin(), previous_examined.end());

    m_state.current_valid.clear();
    m_state.examined.clear();
    for (auto& s : near_optimal_candidates(m_state.cache.optimal, m_cfg.depth)) {
        std::optional<bool> verdict;
        if (auto it = known.find(s); it != known.end()) verdict = transfer_validity(report, s, it->second);
        bool valid;
        if (verdict) {
            valid = *verdict;
            ++info.transferred;
            if (m_cfg.verify && is_valid_adjustment(m_state.cache, s) != valid)
                throw std::logic_error("transferred validity of " + s.to_string() + " disagrees with a full check");
        } else {
            valid = is_valid_adjustment(m_state.cache, s);
            ++info.full_checks;
        }
        if (valid) m_state.current_valid.push_back(s);
        m_state.examined.emplace_back(std::move(s), valid);
    }
    info.candidates = static_cast<int>(m_state.examined.size());
}

void Chain::check_state() {
    if (!m_state.order.precedes(m_x, m_y)) throw std::logic_error("chain state: outcome precedes treatment");
    if (!(m_state.dag == orient(m_skeleton, m_state.order))) throw std::logic_error("chain state: DAG does not match ordering");
    if (bic_score(m_data, m_state.dag, m_scores) != m_state.score)
        throw std::logic_error("chain state: incremental score differs from full rescoring");
    AdjCache fresh = build_adj_cache(m_state.dag, m_x, m_y);
    if (fresh.forb != m_state.cache.forb || fresh.rch != m_state.cache.rch || fresh.clr != m_state.cache.clr ||
        fresh.optimal != m_state.cache.optimal || !(fresh.backdoor == m_state.cache.backdoor))
        throw std::logic_error("chain state: stale adjustment cache");
    if (enumerate_near_optimal(fresh, m_cfg.depth) != m_state.current_valid)
        throw std::logic_error("chain state: current valid list differs from recomputation");
}

// --- drivers ----------------------------------------------------------------

RunResult run(const Dataset& data, NodeId x, NodeId y, const Skeleton& skeleton, const SamplerConfig& cfg) {
    cfg.validate();
    data.validate();
    if (x < 0 || y < 0 || x >= data.cols() || y >= data.cols() || x == y)
        throw std::invalid_argument("treatment and outcome must be distinct columns");
    Rng rng(cfg.seed);
    ScoreCache init_cache;
    OrderSearchResult init = greedy_order_search(data, skeleton, x, y, rng, init_cache, cfg.init_restarts);

    RunResult result;
    result.initial = init.dag;
    Chain chain(data, skeleton, x, y, cfg, init.order);
    const int total = cfg.burnin + cfg.iterations;
    for (int m = 0; m < total; ++m) {
        const bool tallied = m >= cfg.burnin;
        if (m == cfg.burnin) chain.open_tally(result.tally);
        StepInfo info = chain.step(rng, tallied ? &result.tally : nullptr);
        result.accepted += info.accepted;
        result.candidates += info.candidates;
        result.full_checks += info.full_checks;
        result.transferred += info.transferred;
        result.max_candidates_per_step = std::max(result.max_candidates_per_step, info.candidates);
    }
    result.lists = threshold_lists(result.tally, cfg.thresholds);
    return result;
}

VoteResult subsample_vote(const Dataset& data, NodeId x, NodeId y, const Skeleton& skeleton,
                          const SamplerConfig& cfg, int subsample, int repeats, int jobs) {
    if (subsample < 1 || repeats < 1) throw std::invalid_argument("subsample and repeats must be positive");
    std::vector<std::vector<NodeSet>> tops(static_cast<std::size_t>(repeats));
    parallel_for(repeats, jobs, [&](int r) {
        Rng rng(derive_seed(cfg.seed, 0x5u, static_cast<std::uint64_t>(r)));
        std::vector<int> rows(static_cast<std::size_t>(data.rows()));
        std::iota(rows.begin(), rows.end(), 0);
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.resize(static_cast<std::size_t>(std::min(subsample, data.rows())));
        std::sort(rows.begin(), rows.end());
        Dataset part = data.select_rows(rows);
        SamplerConfig rc = cfg;
        rc.seed = derive_seed(cfg.seed, 0x6u, static_cast<std::uint64_t>(r));
        rc.thresholds = {1.0};
        tops[r] = run(part, x, y, skeleton, rc).lists.front().sets;
    });
    std::map<NodeSet, int> counts;
    for (const auto& top : tops)
        for (const auto& s : top) ++counts[s];
    VoteResult out;
    out.repeats = repeats;
    out.votes.assign(counts.begin(), counts.end());
    std::stable_sort(out.votes.begin(), out.votes.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace adjustmcmc
