#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adjustmcmc/adjust.hpp"
#include "adjustmcmc/delta.hpp"
#include "adjustmcmc/model.hpp"
#include "adjustmcmc/skeleton.hpp"

namespace adjustmcmc {

/// When tested counts are incremented.
///  - paper: candidates count as tested when a move is accepted (and once at
///    the start); the current valid list is added every iteration.
///  - on_accept: both counters move together, on acceptance only.
enum class TallyMode { paper, on_accept };

TallyMode parse_tally_mode(const std::string& s);
std::string to_string(TallyMode mode);

struct SamplerConfig {
    int iterations = 100;  ///< M
    int depth = 1;
    std::vector<double> thresholds{1.0, 0.8, 0.5, 0.3, 0.0};
    double accept_scale = 1.0;
    std::uint64_t seed = 0;
    TallyMode tally_mode = TallyMode::paper;
    int burnin = 0;
    int init_restarts = 10;  ///< independent climbs for the initial DAG
    /// Shadow every delta shortcut and incremental score with a full
    /// recomputation; throws std::logic_error on disagreement.
    bool verify = false;

    void validate() const;
};

/// Sparse counters keyed by candidate set.
struct Tally {
    std::map<NodeSet, long long> valid_count;
    std::map<NodeSet, long long> tested_count;
    long long iterations = 0;

    bool empty() const { return tested_count.empty(); }
    /// valid / tested, or nullopt when never tested.
    std::optional<double> rate(const NodeSet& a) const;
    /// Fraction of tallied iterations in which `a` was in the current valid list.
    double iteration_frequency(const NodeSet& a) const;
    /// Counter-wise sum; associative and order-independent.
    void merge(const Tally& other);
};

struct ThresholdList {
    double threshold;
    std::vector<NodeSet> sets;
};

/// For each s: sets with rate r > 0 and r ≥ s · max rate, sorted by rate
/// descending then canonically. Throws std::invalid_argument on an empty tally.
std::vector<ThresholdList> threshold_lists(const Tally& tally, const std::vector<double>& thresholds);

struct Proposal {
    TopologicalOrder order;
    NodeId moved;
};

/// Picks a node and a target index uniformly; resamples both until x precedes y.
Proposal propose_order(const TopologicalOrder& order, Rng& rng, NodeId x, NodeId y);

struct ChainState {
    TopologicalOrder order;
    Dag dag;
    std::vector<double> local_scores;
    double score = 0.0;
    AdjCache cache;
    std::vector<NodeSet> current_valid;               ///< L_cur
    std::vector<std::pair<NodeSet, bool>> examined;   ///< candidates tested at this state
};

struct StepInfo {
    bool accepted = false;
    NodeId moved = -1;
    double log_ratio = 0.0;
    int candidates = 0;   ///< candidates examined this iteration
    int full_checks = 0;  ///< of which needed a full validity check
    int transferred = 0;  ///< of which were decided by an invariance lemma
};

/// One Metropolis–Hastings chain over orderings of a fixed skeleton.
class Chain {
public:
    Chain(const Dataset& data, const Skeleton& skeleton, NodeId x, NodeId y, SamplerConfig cfg,
          TopologicalOrder start);

    /// Proposes a move, accepts with min(1, accept_scale · exp(ΔBIC)) and
    /// refreshes the valid list on acceptance. Tally updates follow cfg.tally_mode.
    StepInfo step(Rng& rng, Tally* tally);

    /// Counts the current state's candidates as tested (start of tallying).
    void open_tally(Tally& tally) const;

    const ChainState& state() const { return m_state; }
    const SamplerConfig& config() const { return m_cfg; }
    /// Full consistency check of the state; throws std::logic_error on mismatch.
    void check_state();

private:
    void refresh_valid_list(const Dag& previous, const AdjCache& previous_cache, NodeId moved,
                            const std::vector<std::pair<NodeSet, bool>>& previous_examined, StepInfo& info);
    void add_current(Tally& tally, bool tested, bool valid) const;

    const Dataset& m_data;
    Skeleton m_skeleton;
    NodeId m_x;
    NodeId m_y;
    SamplerConfig m_cfg;
    ScoreCache m_scores;
    ChainState m_state;
};

struct RunResult {
    Tally tally;
    std::vector<ThresholdList> lists;
    Dag initial;            ///< greedy initial DAG
    long long accepted = 0;
    long long candidates = 0;
    long long full_checks = 0;
    long long transferred = 0;
    int max_candidates_per_step = 0;
};

/// Greedy initial DAG, then cfg.burnin + cfg.iterations MH steps with the first
/// cfg.burnin untallied.
RunResult run(const Dataset& data, NodeId x, NodeId y, const Skeleton& skeleton, const SamplerConfig& cfg);

struct VoteResult {
    std::vector<std::pair<NodeSet, int>> votes;  ///< sorted by count desc, then canonically
    int repeats = 0;
};

/// Reruns the sampler on `repeats` random row subsets of size `subsample`
/// (without replacement) and counts how often each set is among the top-rated.
VoteResult subsample_vote(const Dataset& data, NodeId x, NodeId y, const Skeleton& skeleton,
                          const SamplerConfig& cfg, int subsample, int repeats, int jobs = 1);

}  // namespace adjustmcmc
