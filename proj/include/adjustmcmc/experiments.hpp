#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adjustmcmc/sampler.hpp"

namespace adjustmcmc {

/// Fraction of `sets` valid in `truth`; nullopt for an empty list.
std::optional<double> precision(const std::vector<NodeSet>& sets, const Dag& truth, NodeId x, NodeId y);

/// Mean squared error of the OLS effect estimate over `sets`, against the true
/// total effect. Sets whose regression fails are skipped; nullopt when none remain.
std::optional<double> mse(const std::vector<NodeSet>& sets, const Dataset& data, const Sem& sem, NodeId x, NodeId y);

enum class Amenability { any, amenable, non_amenable };
enum class SkeletonSource { truth, estimate };

Amenability parse_amenability(const std::string& s);
std::string to_string(Amenability a);
SkeletonSource parse_skeleton_source(const std::string& s);
std::string to_string(SkeletonSource s);

struct ExperimentSpec {
    std::vector<int> n_nodes{10};
    int n_dags = 100;
    int rows = 100;        ///< N
    int iterations = 100;  ///< M
    int depth = 1;
    std::vector<double> thresholds{1.0, 0.8, 0.5, 0.3, 0.0};
    Amenability amenability = Amenability::any;
    std::vector<SkeletonSource> skeleton_sources{SkeletonSource::truth, SkeletonSource::estimate};
    double expected_degree = 3.0;
    SkeletonConfig skeleton_cfg;
    TallyMode tally_mode = TallyMode::paper;
    double accept_scale = 1.0;
    int init_restarts = 10;
    std::uint64_t seed = 0;
    int jobs = 1;
    int rejection_budget = 10000;  ///< ground-truth draws per replicate under an amenability filter

    void validate() const;
};

/// Ground truth for one experiment replicate.
struct Replicate {
    Sem sem;
    NodeId x = 0;
    NodeId y = 1;
    bool amenable = false;
    std::uint64_t seed = 0;
};

/// Draws a random SEM and a treatment/outcome pair with x an ancestor of y,
/// rejecting until the amenability filter holds. Throws std::runtime_error
/// when `budget` draws are exhausted.
Replicate draw_replicate(int n, double expected_degree, Amenability filter, std::uint64_t seed, int budget);

struct MetricsRow {
    int n = 0;
    std::string skeleton;  ///< "true" or "estimate"
    std::string method;    ///< "sampler", "opadj_g" (initial DAG) or "opadj_r" (random orientation)
    std::optional<double> threshold;
    std::optional<double> precision;
    std::optional<double> mse;
    double empty_rate = 0.0;
    std::optional<double> mec_rate;  ///< initial DAG in the true MEC (opadj_g rows)
    int dags = 0;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
};

/// Experiments 1 and 2: per n, sampler precision/MSE per threshold under each
/// skeleton source plus the opadj_g / opadj_r baselines.
std::vector<MetricsRow> run_comparison(const ExperimentSpec& spec, std::ostream* log = nullptr);

struct SweepRow {
    std::string sweep;  ///< "log_n" or "iterations"
    double value = 0.0;
    std::string amenability;
    double threshold = 0.0;
    std::optional<double> precision;
    std::optional<double> mse;
    double empty_rate = 0.0;
    int dags = 0;
    std::uint64_t seed = 0;
};

/// Experiment 3: precision against log N (fixed M) and against M (fixed N),
/// for amenable and non-amenable ground truths. The same ground-truth SEMs are
/// reused across the points of a sweep, each point sees a prefix of one dataset
/// per ground truth, and the sampler seed is shared across points.
std::vector<SweepRow> run_sweeps(const ExperimentSpec& spec, const std::vector<double>& log_n_values,
                                 int sweep_iterations, const std::vector<int>& iteration_values, int sweep_rows,
                                 std::ostream* log = nullptr);

struct MotivationRow {
    int n = 0;
    int baseline = 0;
    int shd = 0;
    double precision = 0.0;
    std::uint64_t seed = 0;
};

/// SHD against baseline and the share of a random DAG's valid sets that are
/// also valid in the baseline, for `per_baseline` random DAGs per baseline.
std::vector<MotivationRow> run_motivation(const std::vector<int>& n_list, int repeats, int per_baseline,
                                          double expected_degree, std::uint64_t seed, int jobs = 1);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, bool with_runtime = false);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_motivation_csv(std::ostream& out, const std::vector<MotivationRow>& rows);

}  // namespace adjustmcmc
